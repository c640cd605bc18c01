// Copyright 2026 The fermilab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

#include <filesystem>

#include <gtest/gtest.h>

#include "fermilab/error.hpp"
#include "fermilab/io.hpp"
#include "generators.hpp"

namespace fermilab {
namespace {

using nlohmann::json;
const std::filesystem::path kData = FERMILAB_DATA_DIR;

TEST(Io, ComplexAndMatrix) {
    EXPECT_EQ(parse_complex(json(2.5)), cplx(2.5, 0));
    EXPECT_EQ(parse_complex(json::array({1, -2})), cplx(1, -2));
    EXPECT_THROW(parse_complex(json("x")), parse_error);
    const CMatrix nested = parse_matrix(json::parse("[[1, [0, 1]], [[0, -1], 2]]"), 2, 2);
    const CMatrix flat = parse_matrix(json::parse("[1, [0, 1], [0, -1], 2]"), 2, 2);
    EXPECT_EQ(nested, flat);
    EXPECT_EQ(nested(0, 1), cplx(0, 1));
    EXPECT_THROW(parse_matrix(json::parse("[1, 2, 3]"), 2, 2), parse_error);
}

TEST(Io, MatrixRoundTripProperty) {
    testing::Gen gen(127);
    for (int t = 0; t < 20; ++t) {
        const int r = gen.integer(1, 4), c = gen.integer(1, 4);
        const CMatrix m = gen.matrix(r, c);
        EXPECT_EQ(parse_matrix(matrix_json(m), r, c), m);
    }
}

TEST(Io, StencilRoundTripProperty) {
    testing::Gen gen(131);
    for (int t = 0; t < 20; ++t) {
        const auto s = gen.stencil(gen.integer(1, 3), gen.integer(1, 3));
        const auto back = parse_stencil(stencil_json(s));
        ASSERT_EQ(back.coefficients().size(), s.coefficients().size());
        for (const auto& [g, a] : s.coefficients())
            EXPECT_LT((*back.coefficient(g) - a).norm(), 1e-15);
    }
}

TEST(Io, LoadFiles) {
    const auto s = load_stencil(kData / "ex1.json");
    EXPECT_EQ(s.degree(), 2);
    EXPECT_EQ(symbol_eval(s, FloquetPoint({cplx(1.0)}))(0, 0), cplx(6.0));
    const auto c = load_coupling(kData / "coupling3.json");
    EXPECT_EQ(c.K.rows(), 3);
    EXPECT_EQ(c.base.dim(), 2);
    EXPECT_NO_THROW(validate(c));
}

TEST(Io, Errors) {
    EXPECT_THROW(read_json_file(kData / "missing.json"), io_error);
    EXPECT_THROW(parse_stencil(json::parse(R"({"dim": 1, "fiber": 1})")), parse_error);
    EXPECT_THROW(parse_stencil(json::parse(R"({"dim": 5, "fiber": 1, "coeffs": []})")), domain_error);
    EXPECT_THROW(parse_stencil(json::parse(R"({"dim": 1, "fiber": 1, "coeffs": [{"offset": ["a"], "matrix": 1}]})")),
                 parse_error);
    auto c = load_coupling(kData / "coupling3.json");
    c.K = parse_k(json::parse("[[0, 1], [2, 0]]"));
    EXPECT_THROW(validate(c), domain_error);
}

TEST(Io, CsvNumbersRoundTrip) {
    for (double x : {0.1, -1.0 / 3.0, 1e-300, 6.0})
        EXPECT_EQ(std::stod(csv_number(x)), x);
}

} // namespace
} // namespace fermilab
