/*
 * Copyright 2026 The Engage Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ENGAGE_COMMON_BINARY_IO_HPP_
#define ENGAGE_COMMON_BINARY_IO_HPP_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace engage::io {

// Little-endian scalar encoding independent of host byte order.
void write_u32(std::ostream& out, std::uint32_t v);
void write_f32(std::ostream& out, float v);
void write_f64(std::ostream& out, double v);
void write_magic(std::ostream& out, std::string_view magic);

// Throws std::runtime_error mentioning `what` on a short read.
std::uint32_t read_u32(std::istream& in, std::string_view what);
float read_f32(std::istream& in, std::string_view what);
double read_f64(std::istream& in, std::string_view what);

// Reads 4 bytes and throws unless they equal `magic`.
void expect_magic(std::istream& in, std::string_view magic,
                  const std::string& path);

}  // namespace engage::io

#endif  // ENGAGE_COMMON_BINARY_IO_HPP_
