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

#include "fermilab/quantum_graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "fermilab/error.hpp"
#include "fermilab/torus.hpp"

namespace fermilab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNuExclusion = 1e-6;

void require_mu(double mu, const char* who) {
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw domain_error(std::string(who) + ": mu must be positive and finite");
    if (std::abs(std::sin(mu)) <= kSinGuard)
        throw domain_error(std::string(who) + ": mu is a multiple of pi (flat band of infinite multiplicity)");
}

// Ascending roots of h on [lo, hi] by sign scan and bisection, skipping
// roots within kNuExclusion of `avoid`. The window doubles until branch+1
// roots are found or hi exceeds hi_max.
double find_root(const std::function<double(double)>& h, double avoid, int branch,
                 const char* who, double lo = 1e-3, double hi = 12.0, double hi_max = 200.0) {
    if (branch < 0)
        throw domain_error(std::string(who) + ": branch index must be >= 0");
    const double step = 1e-3;
    std::vector<double> roots;
    double a = lo, fa = h(a);
    double scanned_to = lo;
    while (true) {
        for (double b = scanned_to + step; b <= hi + 0.5 * step; b += step) {
            const double fb = h(b);
            if (fa == 0.0 || fa * fb < 0.0) {
                double x0 = a, x1 = b, f0 = fa;
                if (fa != 0.0) {
                    for (int it = 0; it < 200; ++it) {
                        const double m = 0.5 * (x0 + x1);
                        if (m <= x0 || m >= x1)
                            break;
                        const double fm = h(m);
                        if (fm == 0.0) {
                            x0 = x1 = m;
                            break;
                        }
                        if ((fm < 0.0) == (f0 < 0.0)) {
                            x0 = m;
                            f0 = fm;
                        } else {
                            x1 = m;
                        }
                    }
                }
                const double r = 0.5 * (x0 + x1);
                if (std::abs(r - avoid) > kNuExclusion)
                    roots.push_back(r);
                if (static_cast<int>(roots.size()) > branch)
                    return roots[branch];
            }
            a = b;
            fa = fb;
        }
        scanned_to = a;
        if (hi >= hi_max)
            break;
        hi = std::min(2.0 * hi, hi_max);
    }
    throw domain_error(std::string(who) + ": no admissible root for branch " +
                       std::to_string(branch) + " in (0, " + std::to_string(hi_max) + "]");
}

double rel_residual(double lhs, double rhs) { return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)); }

} // namespace

BoundaryCondition parse_bc(const std::string& s) {
    if (s == "neumann" || s == "N" || s == "n")
        return BoundaryCondition::neumann;
    if (s == "dirichlet" || s == "D" || s == "d")
        return BoundaryCondition::dirichlet;
    throw domain_error("unknown boundary condition '" + s + "' (expected neumann or dirichlet)");
}

const char* to_string(BoundaryCondition bc) {
    return bc == BoundaryCondition::neumann ? "neumann" : "dirichlet";
}

/////////////////// ladder ///////////////////

ChainSecular chain1d_secular(double mu, cplx z, Parity parity) {
    if (mu == 0.0)
        throw domain_error("chain1d_secular: mu must be nonzero");
    const double s = std::sin(0.5 * mu), ch = std::cos(0.5 * mu);
    const double cm = std::cos(mu), sm = std::sin(mu);
    ChainSecular out{mu, z, parity, CMatrix(3, 3), cplx(0.0), cplx(0.0)};
    const bool anti = parity == Parity::antisymmetric;
    const double c0 = anti ? -s : -ch;
    const double c2 = anti ? -mu * ch : mu * s;
    out.matrix << c0, z, 0.0, c0, cm, sm, c2, mu * sm, mu * (z - cm);
    out.det = out.matrix.determinant();
    const double w = anti ? 3.0 * cm + 1.0 : 3.0 * cm - 1.0;
    out.det_closed = mu * (anti ? s : ch) * (z * z - w * z + 1.0);
    return out;
}

double chain1d_z(double mu) {
    const double w = 3.0 * std::cos(mu) + 1.0;
    if (!(std::abs(w) > 2.0))
        throw domain_error("chain1d_z: |3cos mu + 1| <= 2, the antisymmetric branch is propagating");
    return branch_roots(cplx(w)).roots[0].real();
}

NuRoot chain1d_nu(double mu, int branch) {
    require_mu(mu, "chain1d_nu");
    const double z = chain1d_z(mu);
    const double rhs = 2.0 * (z - std::cos(mu)) * mu / std::sin(mu);
    auto h = [&](double nu) { return nu * std::cos(0.5 * nu) - rhs * std::sin(0.5 * nu); };
    NuRoot r;
    r.nu = find_root(h, mu, branch, "chain1d_nu");
    r.v0 = mu * mu - r.nu * r.nu;
    r.residual = rel_residual(r.nu / std::tan(0.5 * r.nu), rhs);
    r.branch = branch;
    return r;
}

ChainBoundState chain1d_bound_state(double mu, int box, int branch) {
    if (box < 2)
        throw domain_error("chain1d_bound_state: box must be >= 2");
    ChainBoundState st;
    st.mu = mu;
    st.z = chain1d_z(mu);
    st.nu = chain1d_nu(mu, branch);
    st.box = box;
    st.cells = LatticeField({box}, 3);

    const double z = st.z, nu = st.nu.nu;
    const double sm = std::sin(mu), cm = std::cos(mu);
    const double sh = std::sin(0.5 * mu);
    auto phi = [&](int g) { return std::pow(z, std::abs(g)); };

    for (int g = -box; g <= box; ++g) {
        st.cells.at({g}, 0) = g == 0 ? 1.0 / std::sin(0.5 * nu) : phi(g) / sh;
        if (g > -box) {
            const double pa = phi(g - 1), pb = phi(g);
            st.cells.at({g}, 1) = pa;
            st.cells.at({g}, 2) = mu * (pb - pa * cm) / sm;
        }
    }

    auto edge_val = [&](int g, double x) {
        const double c = st.cells.at({g}, 1).real(), d = st.cells.at({g}, 2).real();
        return c * std::cos(mu * x) + d * std::sin(mu * x) / mu;
    };
    auto edge_der = [&](int g, double x) {
        const double c = st.cells.at({g}, 1).real(), d = st.cells.at({g}, 2).real();
        return -mu * c * std::sin(mu * x) + d * std::cos(mu * x);
    };
    auto rung_val = [&](int g, double x) {
        const double a = st.cells.at({g}, 0).real();
        return a * std::sin((g == 0 ? nu : mu) * x);
    };
    auto rung_der = [&](int g, double x) {
        const double a = st.cells.at({g}, 0).real();
        const double w = g == 0 ? nu : mu;
        return a * w * std::cos(w * x);
    };

    double scale = 0.0;
    for (int g = -box; g <= box; ++g)
        scale = std::max(scale, std::abs(phi(g)));
    for (int g = -box + 1; g <= box - 1; ++g) {
        const double p = phi(g);
        for (double v : {edge_val(g, 1.0), edge_val(g + 1, 0.0), rung_val(g, 0.5)})
            st.residual_continuity = std::max(st.residual_continuity, std::abs(v - p) / scale);
        const double flux = -edge_der(g, 1.0) + edge_der(g + 1, 0.0) - rung_der(g, 0.5);
        st.residual_flux = std::max(st.residual_flux, std::abs(flux) / (scale * std::max(1.0, mu)));
        // bottom chain: u_bottom = -u_top on horizontal edges, rung end at x = -1/2
        const double pb = -p;
        const double bflux = edge_der(g, 1.0) - edge_der(g + 1, 0.0) + rung_der(g, -0.5);
        st.antisymmetry_error = std::max(
            {st.antisymmetry_error, std::abs(rung_val(g, -0.5) - pb) / scale,
             std::abs(bflux) / (scale * std::max(1.0, mu))});
    }
    st.residual_vertex = std::max(st.residual_continuity, st.residual_flux);

    for (int g = 0; g < box; ++g)
        st.decay_ratio_error = std::max(st.decay_ratio_error, std::abs(phi(g + 1) / phi(g) - z));

    for (int g = -box + 1; g <= box; ++g) {
        for (double x : {0.0, 0.25, 0.5, 0.75, 1.0})
            st.reflection_error = std::max(st.reflection_error,
                                           std::abs(edge_val(g, x) - edge_val(1 - g, 1.0 - x)) / scale);
        st.reflection_error = std::max(
            st.reflection_error,
            std::abs(st.cells.at({g}, 0).real() - st.cells.at({-g}, 0).real()) / scale);
    }

    // Symmetric branch: z + 1/z = 3cos mu - 1 has unit-modulus roots iff cos mu >= -1/3.
    const double half = std::acos(-1.0 / 3.0);
    const double centre = 2.0 * kPi * std::round(mu / (2.0 * kPi));
    st.witness = {centre - half, centre + half, 2};
    st.embedded = std::abs(3.0 * cm - 1.0) <= 2.0 && st.witness.contains(mu);
    return st;
}

/////////////////// grid ///////////////////

BcConstants bc_constants(BoundaryCondition bc, double mu, std::optional<double> nu) {
    BcConstants k;
    if (bc == BoundaryCondition::neumann) {
        k.a = std::cos(0.5 * mu);
        k.b = -mu * std::sin(0.5 * mu);
        if (nu) {
            k.c = std::cos(0.5 * *nu);
            k.d = -*nu * std::sin(0.5 * *nu);
        }
    } else {
        k.a = std::sin(0.5 * mu) / mu;
        k.b = std::cos(0.5 * mu);
        if (nu) {
            k.c = std::sin(0.5 * *nu) / *nu;
            k.d = std::cos(0.5 * *nu);
        }
    }
    return k;
}

GridSecular grid2d_secular(const BcConstants& c, double mu, cplx k1, cplx k2,
                           std::optional<double> nu) {
    if (mu == 0.0)
        throw domain_error("grid2d_secular: mu must be nonzero");
    const cplx I(0.0, 1.0);
    const cplx z1 = std::exp(-I * k1), z2 = std::exp(-I * k2);
    const double cm = std::cos(mu), sm = std::sin(mu);
    GridSecular s{mu, k1, k2, c, CMatrix(5, 5), CVector::Zero(5), cplx(0.0), cplx(0.0)};
    s.matrix << c.a, -1.0, 0.0, 0.0, 0.0,
                c.a, -z1 * cm, -z1 * sm / mu, 0.0, 0.0,
                c.a, 0.0, 0.0, -1.0, 0.0,
                c.a, 0.0, 0.0, -z2 * cm, -z2 * sm / mu,
                c.b, -z1 * mu * sm, z1 * cm - 1.0, -z2 * mu * sm, z2 * cm - 1.0;
    s.det = s.matrix.partialPivLu().determinant();
    s.det_closed = std::exp(-I * (k1 + k2)) * (sm / mu) *
                   (4.0 * c.a * cm + c.b * sm / mu - 2.0 * c.a * (std::cos(k1) + std::cos(k2)));
    if (nu) {
        if (std::abs(*nu * *nu - mu * mu) == 0.0)
            throw domain_error("grid2d_secular: nu^2 = mu^2");
        const double f = -1.0 / (*nu * *nu - mu * mu);
        s.rhs << c.c * f, c.c * f, c.c * f, c.c * f, c.d * f;
    }
    return s;
}

double grid2d_dispersion(BoundaryCondition bc, double mu, double k1, double k2) {
    const double shift = bc == BoundaryCondition::neumann ? -1.0 : 1.0;
    return 5.0 * std::cos(mu) + shift - 2.0 * (std::cos(k1) + std::cos(k2));
}

namespace {

// 5cos mu -+ 1 ranges over a band iff it lies within [-4, 4].
double dispersion_constant(BoundaryCondition bc, double mu) {
    return 5.0 * std::cos(mu) + (bc == BoundaryCondition::neumann ? -1.0 : 1.0);
}

BoundaryCondition companion(BoundaryCondition bc) {
    return bc == BoundaryCondition::neumann ? BoundaryCondition::dirichlet
                                            : BoundaryCondition::neumann;
}

void require_gap(BoundaryCondition bc, double mu, const char* who) {
    const double c0 = dispersion_constant(bc, mu);
    if (!(std::abs(c0) - 4.0 > 1e-9))
        throw domain_error(std::string(who) + ": mu = " + std::to_string(mu) + " is in or at the edge of a " +
                           to_string(bc) + " band");
}

} // namespace

bool grid2d_in_band(BoundaryCondition bc, double mu) {
    return std::abs(dispersion_constant(bc, mu)) <= 4.0;
}

BandReport grid2d_bands(BoundaryCondition bc, double mu_max) {
    BandReport rep;
    rep.variable = "mu";
    const double half = std::acos(-3.0 / 5.0);
    const double offset = bc == BoundaryCondition::neumann ? 0.0 : kPi;
    for (int l = -1; offset + 2.0 * kPi * l - half <= mu_max; ++l) {
        const double c = offset + 2.0 * kPi * l;
        const double lo = std::max(0.0, c - half), hi = std::min(mu_max, c + half);
        if (hi > lo)
            rep.intervals.push_back({lo, hi, 0});
    }
    rep.branches = rep.intervals;
    rep.span = rep.intervals;
    return rep;
}

namespace {

RIntegral r_average(double c0, int quad_n, double tol, double sign) {
    if (quad_n < 4 || quad_n % 2 != 0)
        throw domain_error("R_integral: quad_n must be even and >= 4");
    const TorusGrid grid(2, quad_n);
    std::vector<double> all(grid.size()), half;
    half.reserve(grid.size() / 4);
    std::vector<double> cosk(quad_n);
    for (int j = 0; j < quad_n; ++j)
        cosk[j] = std::cos(grid.node(j));
    for (int i = 0; i < quad_n; ++i)
        for (int j = 0; j < quad_n; ++j) {
            const double v = sign / (c0 - 2.0 * (cosk[i] + cosk[j]));
            all[static_cast<std::size_t>(i) * quad_n + j] = v;
            if (i % 2 == 0 && j % 2 == 0)
                half.push_back(v);
        }
    RIntegral r;
    r.quad_n = quad_n;
    r.value = pairwise_sum(all) / static_cast<double>(all.size());
    r.half_grid_value = pairwise_sum(half) / static_cast<double>(half.size());
    r.rel_change = std::abs(r.value - r.half_grid_value) / std::abs(r.value);
    if (r.rel_change > tol)
        throw convergence_error("R_integral: doubling the grid changed the value by " +
                                std::to_string(r.rel_change) + " (relative)");
    return r;
}

} // namespace

RIntegral R_integral(double mu, int quad_n, double tol) {
    require_gap(BoundaryCondition::dirichlet, mu, "R_integral");
    return r_average(dispersion_constant(BoundaryCondition::dirichlet, mu), quad_n, tol, 1.0);
}

RIntegral R_integral_neumann(double mu, int quad_n, double tol) {
    require_gap(BoundaryCondition::neumann, mu, "R_integral_neumann");
    return r_average(dispersion_constant(BoundaryCondition::neumann, mu), quad_n, tol, -1.0);
}

double grid2d_KD(double mu, double nu, int quad_n) {
    require_mu(mu, "grid2d_KD");
    if (std::abs(nu * nu - mu * mu) <= kNuExclusion || nu == 0.0)
        throw domain_error("grid2d_KD: requires nu != 0 and mu^2 != nu^2");
    const double R = R_integral(mu, quad_n).value;
    const double pre = mu / ((mu * mu - nu * nu) * std::sin(0.5 * mu));
    return pre * (std::cos(0.5 * nu) * std::sin(mu) * R / mu +
                  std::sin(0.5 * nu) / nu * (1.0 - (1.0 + std::cos(mu)) * R));
}

double grid2d_KN(double mu, double nu, int quad_n) {
    require_mu(mu, "grid2d_KN");
    if (std::abs(nu * nu - mu * mu) <= kNuExclusion)
        throw domain_error("grid2d_KN: requires mu^2 != nu^2");
    const double R = R_integral_neumann(mu, quad_n).value;
    const double pre = 1.0 / ((mu * mu - nu * nu) * std::cos(0.5 * mu));
    return pre * (nu / mu * std::sin(0.5 * nu) * std::sin(mu) * R +
                  std::cos(0.5 * nu) * (1.0 - (1.0 - std::cos(mu)) * R));
}

cplx grid2d_KD_hat(double mu, double nu, cplx k1, cplx k2) {
    const cplx I(0.0, 1.0);
    const cplx z1 = std::exp(I * k1), z2 = std::exp(I * k2);
    const cplx sz = z1 + 1.0 / z1 + z2 + 1.0 / z2;
    const double sn = std::sin(0.5 * nu) / nu, cn = std::cos(0.5 * nu);
    const double sm = std::sin(0.5 * mu) / mu, cmh = std::cos(0.5 * mu) / mu;
    const cplx num = 4.0 * sn * std::cos(mu) + cn * std::sin(mu) / mu - sn * sz;
    const cplx den = 4.0 * sm * std::cos(mu) + cmh * std::sin(mu) - sm * sz;
    if (std::abs(den) < 1e-14 * (std::abs(sm) * (4.0 + std::abs(sz)) + std::abs(cmh)))
        throw domain_error("grid2d_KD_hat: pole (point on the Dirichlet Floquet surface)");
    return num / ((mu * mu - nu * nu) * den);
}

cplx grid2d_KN_hat(double mu, double nu, cplx k1, cplx k2) {
    const cplx dn = 5.0 * std::cos(mu) - 1.0 - 2.0 * (std::cos(k1) + std::cos(k2));
    if (std::abs(dn) < 1e-14 * 10.0)
        throw domain_error("grid2d_KN_hat: pole (point on the Neumann Floquet surface)");
    const double pre = 1.0 / ((mu * mu - nu * nu) * std::cos(0.5 * mu));
    return pre * (-(nu / mu) * std::sin(0.5 * nu) * std::sin(mu) / dn +
                  std::cos(0.5 * nu) * (1.0 + (1.0 - std::cos(mu)) / dn));
}

CVector grid2d_solve(BoundaryCondition bc, double mu, double nu, cplx k1, cplx k2) {
    const auto s = grid2d_secular(bc_constants(bc, mu, nu), mu, k1, k2, nu);
    if (std::abs(s.det) < 1e-14)
        throw domain_error("grid2d_solve: singular matching system (mu on the Floquet surface)");
    return s.matrix.partialPivLu().solve(s.rhs);
}

NuRoot grid2d_nu_root(double mu, BoundaryCondition bc, int branch, int quad_n) {
    require_mu(mu, "grid2d_nu_root");
    const double cm = std::cos(mu), sm = std::sin(mu);
    NuRoot r;
    r.branch = branch;
    if (bc == BoundaryCondition::dirichlet) {
        const double R = R_integral(mu, quad_n).value;
        // nu times the bracket of K_D; smooth in nu
        auto h = [&](double nu) {
            return nu * std::cos(0.5 * nu) * sm * R / mu + std::sin(0.5 * nu) * (1.0 - (1.0 + cm) * R);
        };
        r.nu = find_root(h, mu, branch, "grid2d_nu_root");
        const double rhs = mu / sm * (1.0 + cm - 1.0 / R);
        r.residual = rel_residual(r.nu / std::tan(0.5 * r.nu), rhs);
    } else {
        const double R = R_integral_neumann(mu, quad_n).value;
        auto h = [&](double nu) {
            return nu * std::sin(0.5 * nu) * sm * R / mu + std::cos(0.5 * nu) * (1.0 - (1.0 - cm) * R);
        };
        r.nu = find_root(h, mu, branch, "grid2d_nu_root");
        const double rhs = mu / sm * (1.0 - cm - 1.0 / R);
        r.residual = rel_residual(r.nu * std::tan(0.5 * r.nu), rhs);
    }
    r.v0 = mu * mu - r.nu * r.nu;
    return r;
}

double grid2d_predicted_decay(BoundaryCondition bc, double mu) {
    require_gap(bc, mu, "grid2d_predicted_decay");
    return std::acosh(0.5 * (std::abs(dispersion_constant(bc, mu)) - 2.0));
}

namespace {

struct EdgeEval {
    double mu, nu;
    BoundaryCondition bc;
    double sm, cm;

    // dangling edge value and outward-from-vertex derivative term u0'(1/2)
    cplx dangle_val(cplx K, bool defect) const {
        cplx v = bc == BoundaryCondition::neumann ? K * std::cos(0.5 * mu)
                                                  : K * std::sin(0.5 * mu) / mu;
        if (defect)
            v += (bc == BoundaryCondition::neumann ? std::cos(0.5 * nu) : std::sin(0.5 * nu) / nu) /
                 (nu * nu - mu * mu);
        return v;
    }
    cplx dangle_der(cplx K, bool defect) const {
        cplx v = bc == BoundaryCondition::neumann ? -K * mu * std::sin(0.5 * mu)
                                                  : K * std::cos(0.5 * mu);
        if (defect)
            v += (bc == BoundaryCondition::neumann ? -nu * std::sin(0.5 * nu) : std::cos(0.5 * nu)) /
                 (nu * nu - mu * mu);
        return v;
    }
    // value and slope at the midpoint x = 0 of the full rung
    cplx dangle_val0(cplx K, bool defect) const {
        cplx v = bc == BoundaryCondition::neumann ? K : cplx(0.0);
        if (defect && bc == BoundaryCondition::neumann)
            v += 1.0 / (nu * nu - mu * mu);
        return v;
    }
    cplx dangle_der0(cplx K, bool defect) const {
        cplx v = bc == BoundaryCondition::neumann ? cplx(0.0) : K;
        if (defect && bc == BoundaryCondition::dirichlet)
            v += 1.0 / (nu * nu - mu * mu);
        return v;
    }
    cplx end_val(cplx c, cplx d) const { return c * cm + d * sm / mu; }
    cplx end_der(cplx c, cplx d) const { return -mu * sm * c + cm * d; }
};

struct VertexResiduals {
    double continuity = 0.0;
    double flux = 0.0;
};

// Vertex conditions of one layer scaled by sigma; the rung end of the
// bottom layer is reached through the reflection u_b(x) = sigma u(-x).
VertexResiduals check_vertices(const LatticeField& cells, const EdgeEval& ev, double sigma) {
    const int B = cells.half_width()[0];
    double scale = 0.0;
    for (int g1 = -B; g1 <= B; ++g1)
        for (int g2 = -B; g2 <= B; ++g2) {
            const Offset g{g1, g2};
            scale = std::max(scale, std::abs(ev.dangle_val(cells.at(g, 0), g1 == 0 && g2 == 0)));
        }
    if (scale == 0.0)
        scale = 1.0;
    VertexResiduals r;
    for (int g1 = -B + 1; g1 <= B - 1; ++g1)
        for (int g2 = -B + 1; g2 <= B - 1; ++g2) {
            const Offset g{g1, g2}, l1{g1 - 1, g2}, l2{g1, g2 - 1};
            const bool defect = g1 == 0 && g2 == 0;
            const cplx v = sigma * ev.dangle_val(cells.at(g, 0), defect);
            const cplx c1 = sigma * cells.at(g, 1), d1 = sigma * cells.at(g, 2);
            const cplx c2 = sigma * cells.at(g, 3), d2 = sigma * cells.at(g, 4);
            const cplx e1 = sigma * ev.end_val(cells.at(l1, 1), cells.at(l1, 2));
            const cplx e2 = sigma * ev.end_val(cells.at(l2, 3), cells.at(l2, 4));
            for (const cplx& w : {c1, c2, e1, e2})
                r.continuity = std::max(r.continuity, std::abs(w - v) / scale);
            // outward derivatives: rung, two outgoing edges, two incoming edges
            const cplx rung_out = -sigma * ev.dangle_der(cells.at(g, 0), defect);
            const cplx f = rung_out + d1 + d2 - sigma * ev.end_der(cells.at(l1, 1), cells.at(l1, 2)) -
                           sigma * ev.end_der(cells.at(l2, 3), cells.at(l2, 4));
            r.flux = std::max(r.flux, std::abs(f) / (scale * std::max(1.0, ev.mu)));
        }
    return r;
}

} // namespace

GridBoundState grid2d_bound_state_at(double mu, BoundaryCondition bc, double nu, int box,
                                     int quad_n) {
    require_mu(mu, "grid2d_bound_state");
    require_gap(bc, mu, "grid2d_bound_state");
    if (!(nu > 0.0) || std::abs(nu - mu) <= kNuExclusion)
        throw domain_error("grid2d_bound_state: nu must be positive and differ from mu");
    if (box < 2)
        throw domain_error("grid2d_bound_state: box must be >= 2");
    if (quad_n < 4 || quad_n % 2 != 0 || 2 * box >= quad_n)
        throw domain_error("grid2d_bound_state: need even quad_n > 2*box");

    GridBoundState st;
    st.mu = mu;
    st.bc = bc;
    st.nu = nu;
    st.v0 = mu * mu - nu * nu;
    st.box = box;
    st.quad_n = quad_n;

    const TorusGrid grid(2, quad_n);
    const BcConstants kc = bc_constants(bc, mu, nu);
    std::vector<cplx> samples(grid.size() * 5);
    std::vector<cplx> khalf;
    khalf.reserve(grid.size() / 4);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto idx = grid.index(i);
        const auto s = grid2d_secular(kc, mu, grid.node(idx[0]), grid.node(idx[1]), nu);
        const CVector x = s.matrix.partialPivLu().solve(s.rhs);
        for (int c = 0; c < 5; ++c)
            samples[i * 5 + c] = x[c];
        if (idx[0] % 2 == 0 && idx[1] % 2 == 0)
            khalf.push_back(x[0]);
    }
    st.cells = inverse_floquet(grid, samples, 5, {box, box});
    const cplx k0 = st.cells.at({0, 0}, 0);
    st.k0 = k0.real();
    st.quad_error = std::abs(k0 - pairwise_sum(khalf) / static_cast<double>(khalf.size()));
    st.cells.at({0, 0}, 0) = 0.0;

    const EdgeEval ev{mu, nu, bc, std::sin(mu), std::cos(mu)};
    const auto r = check_vertices(st.cells, ev, 1.0);
    st.residual_continuity = r.continuity;
    st.residual_flux = r.flux;
    st.residual_vertex = std::max(r.continuity, r.flux);

    st.decay = fit_decay(st.cells, 1, 0.5);
    st.predicted_alpha = grid2d_predicted_decay(bc, mu);
    st.tail = -1;
    for (std::size_t i = 0; i < st.cells.site_count(); ++i)
        if (std::abs(st.cells.fiber_at(i)[0]) > 1e-13)
            st.tail = std::max(st.tail, linf_norm(st.cells.site(i)));

    const BoundaryCondition other = companion(bc);
    st.embedded = grid2d_in_band(other, mu);
    if (st.embedded) {
        const auto bands = grid2d_bands(other, mu + kPi);
        if (auto w = bands.witness(mu))
            st.witness = *w;
        else
            st.embedded = false;
    }
    return st;
}

GridBoundState grid2d_bound_state(double mu, BoundaryCondition bc, int box, int quad_n,
                                  int branch) {
    const auto root = grid2d_nu_root(mu, bc, branch, quad_n);
    return grid2d_bound_state_at(mu, bc, root.nu, box, quad_n);
}

BilayerCheck grid2d_mirror_lift(const GridBoundState& state) {
    BilayerCheck chk;
    chk.sigma = state.bc == BoundaryCondition::neumann ? 1 : -1;
    const EdgeEval ev{state.mu, state.nu, state.bc, std::sin(state.mu), std::cos(state.mu)};
    const double sigma = chk.sigma;
    double scale = 0.0;
    for (std::size_t i = 0; i < state.cells.site_count(); ++i) {
        const Offset g = state.cells.site(i);
        const bool defect = g[0] == 0 && g[1] == 0;
        scale = std::max(scale, std::abs(ev.dangle_val(state.cells.fiber_at(i)[0], defect)));
    }
    if (scale == 0.0)
        scale = 1.0;
    for (std::size_t i = 0; i < state.cells.site_count(); ++i) {
        const Offset g = state.cells.site(i);
        const bool defect = g[0] == 0 && g[1] == 0;
        const cplx K = state.cells.fiber_at(i)[0];
        // top half u(x), bottom half sigma u(-x): compare at x = 0
        const cplx v = ev.dangle_val0(K, defect), s = ev.dangle_der0(K, defect);
        chk.midpoint_value_jump = std::max(chk.midpoint_value_jump, std::abs(v - sigma * v) / scale);
        chk.midpoint_slope_jump = std::max(chk.midpoint_slope_jump,
                                           std::abs(s + sigma * s) / (scale * std::max(1.0, state.mu)));
    }
    const auto top = check_vertices(state.cells, ev, 1.0);
    const auto bottom = check_vertices(state.cells, ev, sigma);
    chk.residual_top = std::max(top.continuity, top.flux);
    chk.residual_bottom = std::max(bottom.continuity, bottom.flux);
    chk.residual = std::max({chk.residual_top, chk.residual_bottom, chk.midpoint_value_jump,
                             chk.midpoint_slope_jump});
    return chk;
}

} // namespace fermilab
