/*
   Copyright 2026 The flatpath Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include "flatpath/distributions.hpp"
#include "flatpath/error.hpp"
#include "flatpath/geometry.hpp"
#include "flatpath/rng.hpp"
#include "flatpath/sampling.hpp"
#include "flatpath/separation.hpp"
#include "flatpath/surface.hpp"
#include "flatpath/tracer.hpp"
#include "flatpath/walk.hpp"
#include "flatpath/zippered.hpp"
