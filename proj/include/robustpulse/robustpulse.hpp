// Copyright 2026 The robustpulse Authors
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

#ifndef ROBUSTPULSE_ROBUSTPULSE_HPP
#define ROBUSTPULSE_ROBUSTPULSE_HPP

#include "robustpulse/dynamics.hpp"
#include "robustpulse/elliptic.hpp"
#include "robustpulse/errors.hpp"
#include "robustpulse/extremal.hpp"
#include "robustpulse/io.hpp"
#include "robustpulse/quadrature.hpp"
#include "robustpulse/sensitivity.hpp"
#include "robustpulse/twoqubit.hpp"
#include "robustpulse/types.hpp"
#include "robustpulse/version.hpp"

#endif  // ROBUSTPULSE_ROBUSTPULSE_HPP
