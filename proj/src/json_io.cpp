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

#include "xlqr/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace xlqr {

json matrix_to_json(const Matrix& M) {
  json j;
  j["rows"] = M.rows();
  j["cols"] = M.cols();
  json data = json::array();
  for (long i = 0; i < M.rows(); ++i)
    for (long c = 0; c < M.cols(); ++c) data.push_back(M(i, c));
  j["data"] = data;
  return j;
}

Matrix matrix_from_json(const json& j) {
  const long rows = j.at("rows").get<long>();
  const long cols = j.at("cols").get<long>();
  const auto& data = j.at("data");
  if (static_cast<long>(data.size()) != rows * cols) {
    throw std::invalid_argument("matrix_from_json: data length mismatch");
  }
  Matrix M(rows, cols);
  long k = 0;
  for (long i = 0; i < rows; ++i)
    for (long c = 0; c < cols; ++c) M(i, c) = data[k++].get<double>();
  return M;
}

json system_to_json(const LinearSystem& sys) {
  return json{{"A", matrix_to_json(sys.A)}, {"B", matrix_to_json(sys.B)}};
}

LinearSystem system_from_json(const json& j) {
  return LinearSystem{matrix_from_json(j.at("A")), matrix_from_json(j.at("B"))};
}

json region_to_json(const EllipsoidRegion& region) {
  return json{{"A_hat", matrix_to_json(region.A_hat)},
              {"B_hat", matrix_to_json(region.B_hat)},
              {"D", matrix_to_json(region.D)},
              {"delta", region.delta},
              {"c_delta", region.c_delta}};
}

EllipsoidRegion region_from_json(const json& j) {
  EllipsoidRegion region;
  region.A_hat = matrix_from_json(j.at("A_hat"));
  region.B_hat = matrix_from_json(j.at("B_hat"));
  region.D = matrix_from_json(j.at("D"));
  region.delta = j.at("delta").get<double>();
  region.c_delta = j.at("c_delta").get<double>();
  return region;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_json: cannot open " + path);
  json j;
  in >> j;
  return j;
}

void save_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_json: cannot open " + path);
  out << j.dump(2) << "\n";
}

}  // namespace xlqr
