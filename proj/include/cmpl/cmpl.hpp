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

#include "cmpl/adversarial.hpp"
#include "cmpl/aggregates.hpp"
#include "cmpl/completeness.hpp"
#include "cmpl/containment.hpp"
#include "cmpl/core.hpp"
#include "cmpl/eval.hpp"
#include "cmpl/frontend.hpp"
#include "cmpl/instance.hpp"
#include "cmpl/nulls.hpp"
#include "cmpl/order.hpp"
#include "cmpl/process.hpp"
#include "cmpl/rational.hpp"
