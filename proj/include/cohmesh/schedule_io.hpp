/*
 * Copyright 2026 The cohmesh Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cohmesh/statement.hpp"

namespace cohmesh {

// Schedule text format:
//
//   # comment
//   tile <col> <row>
//   <i> <j> <k> <w>      one statement per line, in execution order
//   tile <col> <row>
//   ...

Schedule read_schedule(std::istream& in, const std::string& source = "<stream>");
Schedule load_schedule(const std::filesystem::path& path);
void write_schedule(std::ostream& out, const Schedule& schedule, const std::string& comment = {});

}  // namespace cohmesh
