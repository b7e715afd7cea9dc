/*
 Copyright 2026 The xlqr authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

 https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef XLQR_JSON_IO_HPP
#define XLQR_JSON_IO_HPP

#include <string>

#include <nlohmann/json.hpp>

#include "xlqr/sim.hpp"
#include "xlqr/sysid.hpp"

namespace xlqr {

using json = nlohmann::json;

/// Matrices serialize as {"rows": r, "cols": c, "data": [row-major]}.
json matrix_to_json(const Matrix& M);
Matrix matrix_from_json(const json& j);

json system_to_json(const LinearSystem& sys);
LinearSystem system_from_json(const json& j);

/// {"A_hat":…, "B_hat":…, "D":…, "delta":…, "c_delta":…}
json region_to_json(const EllipsoidRegion& region);
EllipsoidRegion region_from_json(const json& j);

json load_json(const std::string& path);
void save_json(const json& j, const std::string& path);

}  // namespace xlqr

#endif  // XLQR_JSON_IO_HPP
