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

#include <doctest.h>

#include <cstdio>

#include "xlqr/json_io.hpp"

using xlqr::EllipsoidRegion;
using xlqr::LinearSystem;
using xlqr::Matrix;

TEST_SUITE("json_io") {

TEST_CASE("matrices serialize row-major with explicit shape") {
  Matrix M(2, 3);
  M << 1, 2, 3, 4, 5, 6;
  const xlqr::json j = xlqr::matrix_to_json(M);
  CHECK(j["rows"] == 2);
  CHECK(j["cols"] == 3);
  REQUIRE(j["data"].size() == 6);
  CHECK(j["data"][1].get<double>() == doctest::Approx(2.0));
  CHECK(j["data"][3].get<double>() == doctest::Approx(4.0));
  CHECK((xlqr::matrix_from_json(j) - M).norm() == doctest::Approx(0.0));
}

TEST_CASE("malformed matrix payloads are rejected") {
  xlqr::json j;
  j["rows"] = 2;
  j["cols"] = 2;
  j["data"] = {1.0, 2.0, 3.0};
  CHECK_THROWS(xlqr::matrix_from_json(j));
}

TEST_CASE("system and region round trips") {
  LinearSystem sys{Matrix::Constant(1, 1, 1.5), Matrix::Constant(1, 1, 1.8)};
  const LinearSystem sys2 = xlqr::system_from_json(xlqr::system_to_json(sys));
  CHECK((sys2.A - sys.A).norm() == doctest::Approx(0.0));
  CHECK((sys2.B - sys.B).norm() == doctest::Approx(0.0));

  EllipsoidRegion region;
  region.A_hat = sys.A;
  region.B_hat = sys.B;
  region.D = 50.0 * Matrix::Identity(2, 2);
  region.delta = 0.1;
  region.c_delta = 4.6;
  const xlqr::json j = xlqr::region_to_json(region);
  CHECK(j.contains("A_hat"));
  CHECK(j.contains("B_hat"));
  CHECK(j.contains("D"));
  CHECK(j.contains("delta"));
  CHECK(j.contains("c_delta"));
  const EllipsoidRegion back = xlqr::region_from_json(j);
  CHECK((back.D - region.D).norm() == doctest::Approx(0.0));
  CHECK(back.delta == doctest::Approx(0.1));
  CHECK(back.c_delta == doctest::Approx(4.6));
}

TEST_CASE("file round trip") {
  const std::string path = "json_io_test.json";
  xlqr::json j;
  j["hello"] = 1.25;
  xlqr::save_json(j, path);
  const xlqr::json back = xlqr::load_json(path);
  CHECK(back["hello"].get<double>() == doctest::Approx(1.25));
  std::remove(path.c_str());
  CHECK_THROWS(xlqr::load_json(path));
}

}  // TEST_SUITE
