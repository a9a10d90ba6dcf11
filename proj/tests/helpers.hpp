// Copyright 2026 The cmpl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "cmpl/cmpl.hpp"

namespace testing_util {

inline cmpl::Workspace parse(const std::string& text) {
  return cmpl::parse_workspace(text, "<test>");
}

inline cmpl::Workspace load_example(const std::string& file) {
  std::ifstream in(std::string(CMPL_EXAMPLES_DIR) + "/" + file);
  std::stringstream buf;
  buf << in.rdbuf();
  return cmpl::parse_workspace(buf.str(), file);
}

}  // namespace testing_util
