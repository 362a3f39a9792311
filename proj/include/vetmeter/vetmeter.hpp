// Copyright 2026 The vetmeter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VETMETER_VETMETER_HPP_
#define VETMETER_VETMETER_HPP_

#include "vetmeter/analysis.hpp"
#include "vetmeter/changepoint.hpp"
#include "vetmeter/error.hpp"
#include "vetmeter/ideal_estimator.hpp"
#include "vetmeter/ingest.hpp"
#include "vetmeter/simulator.hpp"
#include "vetmeter/tail_stats.hpp"
#include "vetmeter/trace_model.hpp"
#include "vetmeter/vet.hpp"

#endif  // VETMETER_VETMETER_HPP_
