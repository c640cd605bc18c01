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

#pragma once

// JSON and CSV serialization.
//
// Stencil files: {"dim": n, "fiber": d, "coeffs": [{"offset": [...],
// "matrix": ...}]}. Only offsets with g lex >= 0 are stored; the mirror
// terms are derived. A matrix is a list of d rows of d entries, or a flat
// row-major list of d*d entries; an entry is a number or [re, im].

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fermilab/coupling.hpp"
#include "fermilab/dispersion.hpp"
#include "fermilab/greens.hpp"
#include "fermilab/lattice.hpp"
#include "fermilab/quantum_graph.hpp"

namespace fermilab {

// Throws io_error when the file cannot be read and parse_error on bad JSON.
nlohmann::json read_json_file(const std::filesystem::path& path);

// Complex entry from a number or [re, im].
cplx parse_complex(const nlohmann::json& j);
nlohmann::json complex_json(cplx z);

// rows x cols matrix in either layout above; rows = cols = 0 infers a square shape.
CMatrix parse_matrix(const nlohmann::json& j, int rows = 0, int cols = 0);
nlohmann::json matrix_json(const CMatrix& m);

// Throws parse_error on malformed input, domain_error when an offset is lex
// negative, repeated, or the mirror rule is violated at g = 0.
PeriodicStencil parse_stencil(const nlohmann::json& j);
PeriodicStencil load_stencil(const std::filesystem::path& path);
nlohmann::json stencil_json(const PeriodicStencil& s);

// {"base": stencil or file, "rabi": stencil or file, "K": matrix}. File
// references are resolved against base_dir. Without "rabi", L = I.
CouplingSpec parse_coupling(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
CouplingSpec load_coupling(const std::filesystem::path& path);

// A bare matrix or {"K": matrix}.
CMatrix parse_k(const nlohmann::json& j);

nlohmann::json band_json(const BandReport& b);
nlohmann::json decay_json(const DecayFit& f);
nlohmann::json greens_json(const GreensResult& g, const SiteDefect& v, double residual);
nlohmann::json example1_json(const Example1Defect& e, double residual);
nlohmann::json chain_json(const ChainBoundState& s);
nlohmann::json grid_json(const GridBoundState& s, const BandReport& bands);
nlohmann::json embed_json(const EmbedResult& e);

// CSV helpers: header line plus rows, '\n' line ends, %.17g numbers.
std::string csv_number(double x);
std::string dispersion_csv(const std::vector<CriticalPoint>& pts);
std::string decay_csv(const DecayFit& f);
std::string cells_csv(const LatticeField& cells, const std::vector<std::string>& columns);
std::string bands_csv(const BandReport& b);

} // namespace fermilab
