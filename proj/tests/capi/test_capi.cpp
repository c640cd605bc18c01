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

// Exercises the shared library through its C header only.

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "fermilab/fermilab.h"

namespace {

using nlohmann::json;

const std::string kData = FERMILAB_DATA_DIR;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Doc {
    fl_document* d = nullptr;
    ~Doc() { fl_document_free(d); }
    json parse() const { return json::parse(fl_document_text(d)); }
    std::string text() const { return fl_document_text(d); }
};

struct Stencil {
    fl_stencil* s = nullptr;
    ~Stencil() { fl_stencil_free(s); }
};

TEST(CApi, VersionAndOptions) {
    EXPECT_STRNE(fl_version(), "");
    fl_options opt;
    fl_options_init(&opt);
    EXPECT_EQ(opt.format, FL_FORMAT_JSON);
    EXPECT_EQ(opt.quad_n, 0);
    EXPECT_EQ(opt.box, 0);
}

TEST(CApi, StencilHandle) {
    Stencil st;
    ASSERT_EQ(fl_stencil_load((kData + "/ex1.json").c_str(), &st.s), FL_OK);
    EXPECT_EQ(fl_stencil_dim(st.s), 1);
    EXPECT_EQ(fl_stencil_fiber(st.s), 1);
    EXPECT_EQ(fl_stencil_degree(st.s), 2);
    const double k = 0.0;
    double sym[2];
    ASSERT_EQ(fl_stencil_symbol(st.s, &k, 1, sym, 2), FL_OK);
    EXPECT_DOUBLE_EQ(sym[0], 6.0);
    EXPECT_EQ(fl_stencil_symbol(st.s, &k, 1, sym, 1), FL_ERR_INVALID_ARGUMENT);
    double re, im;
    ASSERT_EQ(fl_stencil_det(st.s, &k, 1, 6.0, &re, &im), FL_OK);
    EXPECT_NEAR(re, 0.0, 1e-15);
    int count = -1, edge = -1;
    ASSERT_EQ(fl_multiplicity_1d(st.s, -2.5, &count, &edge), FL_OK);
    EXPECT_EQ(count, 4);
    EXPECT_EQ(edge, 0);
}

TEST(CApi, StatusCodes) {
    fl_stencil* s = nullptr;
    EXPECT_EQ(fl_stencil_load((kData + "/missing.json").c_str(), &s), FL_ERR_IO);
    EXPECT_STRNE(fl_last_error(), "");
    EXPECT_EQ(fl_stencil_parse("{not json", &s), FL_ERR_PARSE);
    EXPECT_EQ(fl_stencil_parse(nullptr, &s), FL_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(s, nullptr);
    Doc doc;
    EXPECT_EQ(fl_run_ex3(std::acos(-1.0) / 2, nullptr, &doc.d), FL_ERR_DOMAIN);
    EXPECT_EQ(fl_run_grid2d(0.5, "robin", nullptr, &doc.d), FL_ERR_DOMAIN);
    EXPECT_EQ(doc.d, nullptr);
    EXPECT_EQ(fl_run_ex1(0.5, nullptr, nullptr), FL_ERR_INVALID_ARGUMENT);
}

TEST(CApi, ExampleOne) {
    Doc doc;
    ASSERT_EQ(fl_run_ex1(std::log(2.0), nullptr, &doc.d), FL_OK) << fl_last_error();
    const auto j = doc.parse();
    EXPECT_NEAR(j.at("V0").get<double>(), 0.75, 1e-14);
    EXPECT_NEAR(j.at("V1").get<double>(), 3.0, 1e-14);
    EXPECT_EQ(fl_document_size(doc.d), std::strlen(fl_document_text(doc.d)));
}

TEST(CApi, BandsCsv) {
    Stencil st;
    ASSERT_EQ(fl_stencil_load((kData + "/ex1.json").c_str(), &st.s), FL_OK);
    fl_options opt;
    fl_options_init(&opt);
    opt.format = FL_FORMAT_CSV;
    Doc doc;
    ASSERT_EQ(fl_run_bands(st.s, &opt, &doc.d), FL_OK);
    EXPECT_EQ(doc.text().rfind("k,lambda\n", 0), 0u);
}

TEST(CApi, GreenAndCoupled) {
    Stencil st;
    ASSERT_EQ(fl_stencil_load((kData + "/chain.json").c_str(), &st.s), FL_OK);
    Doc g;
    ASSERT_EQ(fl_run_green(st.s, -3.0, nullptr, &g.d), FL_OK) << fl_last_error();
    EXPECT_NEAR(g.parse().at("V0").get<double>(), -std::sqrt(5.0), 1e-12);
    Doc c;
    ASSERT_EQ(fl_run_coupled(st.s, nullptr, 0.7, 0.3, kNaN, 1, kNaN, nullptr, &c.d), FL_OK)
        << fl_last_error();
    EXPECT_EQ(fl_run_coupled(st.s, nullptr, 0.7, 0.3, kNaN, 3, kNaN, nullptr, &c.d),
              FL_ERR_INVALID_ARGUMENT);
}

TEST(CApi, VerifySubset) {
    Doc doc;
    int suite_exit = -1;
    ASSERT_EQ(fl_run_verify(R"(["ex1", "ex1.corrupt_v0"])", nullptr, &doc.d, &suite_exit), FL_OK)
        << fl_last_error();
    EXPECT_EQ(suite_exit, 0);
    EXPECT_EQ(doc.parse().at("cases").size(), 2u);
}

} // namespace
