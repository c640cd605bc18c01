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

// Command-line front end over the C API.
//
// Exit codes: 0 success, 1 verify suite failed, 2 domain error,
// 3 convergence error, 64 usage, 65 bad input data, 66 missing or
// unreadable file, 70 internal error, 73 output not writable.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fermilab/fermilab.h"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitNoInput = 66;
constexpr int kExitSoftware = 70;
constexpr int kExitCantCreate = 73;

int exit_code(fl_status st) {
    switch (st) {
    case FL_OK:
        return 0;
    case FL_ERR_DOMAIN:
        return 2;
    case FL_ERR_CONVERGENCE:
        return 3;
    case FL_ERR_INVALID_ARGUMENT:
        return kExitUsage;
    case FL_ERR_PARSE:
        return kExitData;
    case FL_ERR_IO:
        return kExitNoInput;
    default:
        return kExitSoftware;
    }
}

struct StencilDeleter {
    void operator()(fl_stencil* s) const { fl_stencil_free(s); }
};
struct DocumentDeleter {
    void operator()(fl_document* d) const { fl_document_free(d); }
};
using StencilPtr = std::unique_ptr<fl_stencil, StencilDeleter>;
using DocumentPtr = std::unique_ptr<fl_document, DocumentDeleter>;

struct Failure {
    int code;
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Failure{kExitNoInput, "cannot open '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void check(fl_status st) {
    if (st != FL_OK)
        throw Failure{exit_code(st), fl_last_error()};
}

StencilPtr load_stencil(const std::string& path) {
    fl_stencil* s = nullptr;
    check(fl_stencil_load(path.c_str(), &s));
    return StencilPtr(s);
}

struct Common {
    std::string format = "json";
    std::optional<int> quad_n;
    std::optional<int> box;
    std::string output;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    app->add_option("--quad-n", c.quad_n, "Quadrature points per torus axis")
        ->check(CLI::Range(4, 1 << 16));
    app->add_option("--box", c.box, "Half width of the output box")->check(CLI::Range(1, 10000));
    app->add_option("-o,--output", c.output, "Write the document here instead of stdout");
}

fl_options make_options(const Common& c) {
    fl_options o;
    fl_options_init(&o);
    o.format = c.format == "csv" ? FL_FORMAT_CSV : FL_FORMAT_JSON;
    if (c.quad_n) {
        o.quad_n = *c.quad_n;
    } else if (const char* env = std::getenv("FERMILAB_QUAD_N")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 4 || v > (1 << 16))
            throw Failure{kExitUsage, std::string("FERMILAB_QUAD_N must be an integer in [4, 65536], got '") +
                                          env + "'"};
        o.quad_n = static_cast<int>(v);
    }
    if (c.box)
        o.box = *c.box;
    return o;
}

void write_document(const fl_document* d, const std::string& path) {
    if (path.empty()) {
        std::fwrite(fl_document_text(d), 1, fl_document_size(d), stdout);
        std::fflush(stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Failure{kExitCantCreate, "cannot write '" + path + "'"};
    out.write(fl_document_text(d), static_cast<std::streamsize>(fl_document_size(d)));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Embedded eigenvalues of locally perturbed periodic operators", "fermilab"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    add_common(&app, common);

    double alpha = 0.0, a = 0.0, b = 0.0, c = 0.0, mu = 0.0, lambda = 0.0;
    double theta = 0.0, phi = 0.0;
    std::optional<double> lambda0, coupled_lambda;
    int variant = 1;
    std::string stencil_path, k_path, config_path, bc;

    auto* ex1 = app.add_subcommand("ex1", "Fourth-order chain with a three-site defect");
    ex1->add_option("--alpha", alpha, "Decay rate, in (0, acosh 2)")->required();

    auto* ex2 = app.add_subcommand("ex2", "Bands of two coupled chains");
    ex2->add_option("--a", a)->required();
    ex2->add_option("--b", b)->required();
    ex2->add_option("--c", c)->required();

    auto* ex3 = app.add_subcommand("ex3", "Decorated ladder bound state");
    ex3->add_option("--mu", mu, "sqrt(lambda)")->required();

    auto* coupled = app.add_subcommand("coupled", "Coupled copies and the hybrid embedding");
    coupled->add_option("--stencil", stencil_path, "Stencil JSON file")->required();
    coupled->add_option("--K", k_path, "Coupling matrix JSON file (default: two-graph K)");
    coupled->add_option("--theta", theta);
    coupled->add_option("--phi", phi);
    coupled->add_option("--lambda0", lambda0, "L = lambda0 I (default: centred in the widest band)");
    coupled->add_option("--variant", variant, "Defect variant; 0 skips the embedding")
        ->check(CLI::Range(0, 2));
    coupled->add_option("--lambda", coupled_lambda, "Defect eigenvalue (default: below the spectrum)");

    auto* green = app.add_subcommand("green", "Lattice Green's function and its point defect");
    green->add_option("--stencil", stencil_path, "Stencil JSON file")->required();
    green->add_option("--lambda", lambda)->required();

    auto* grid2d = app.add_subcommand("grid2d", "Square-grid quantum graph bound state");
    grid2d->add_option("--mu", mu, "sqrt(lambda)")->required();
    grid2d->add_option("--bc", bc, "Dangling-edge condition")
        ->required()
        ->check(CLI::IsMember({"dirichlet", "neumann"}));

    auto* bands = app.add_subcommand("bands", "Band structure of a stencil");
    bands->add_option("--stencil", stencil_path, "Stencil JSON file")->required();

    auto* verify = app.add_subcommand("verify", "Run the verification suite");
    verify->add_option("--config", config_path, "Suite configuration (default: all cases)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "fermilab: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        const fl_options opt = make_options(common);
        fl_document* raw = nullptr;
        int status = 0;
        const double nan = std::numeric_limits<double>::quiet_NaN();

        if (ex1->parsed()) {
            check(fl_run_ex1(alpha, &opt, &raw));
        } else if (ex2->parsed()) {
            check(fl_run_ex2(a, b, c, &opt, &raw));
        } else if (ex3->parsed()) {
            check(fl_run_ex3(mu, &opt, &raw));
        } else if (coupled->parsed()) {
            const auto s = load_stencil(stencil_path);
            const std::string k_text = k_path.empty() ? std::string() : read_file(k_path);
            check(fl_run_coupled(s.get(), k_path.empty() ? nullptr : k_text.c_str(), theta, phi,
                                 lambda0.value_or(nan), variant, coupled_lambda.value_or(nan), &opt,
                                 &raw));
        } else if (green->parsed()) {
            const auto s = load_stencil(stencil_path);
            check(fl_run_green(s.get(), lambda, &opt, &raw));
        } else if (grid2d->parsed()) {
            check(fl_run_grid2d(mu, bc.c_str(), &opt, &raw));
        } else if (bands->parsed()) {
            const auto s = load_stencil(stencil_path);
            check(fl_run_bands(s.get(), &opt, &raw));
        } else if (verify->parsed()) {
            const std::string cfg = config_path.empty() ? std::string() : read_file(config_path);
            check(fl_run_verify(config_path.empty() ? nullptr : cfg.c_str(), &opt, &raw, &status));
        }
        const DocumentPtr doc(raw);
        write_document(doc.get(), common.output);
        return status == 0 ? 0 : 1;
    } catch (const Failure& f) {
        std::cerr << "fermilab: " << f.message << "\n";
        return f.code;
    }
}
