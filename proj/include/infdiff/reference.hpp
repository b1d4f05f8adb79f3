#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "batch.hpp"
#include "errors.hpp"
#include "problems.hpp"

namespace infdiff {

struct ReferenceOptions {
    int cells = 2048;
    double max_step = 1e-6;
    double max_horizon = 0.1;
};

namespace detail {

// Method-of-lines discretization on a uniform node grid with two ghost nodes
// on each side. Dirichlet-zero boundaries use odd reflection about the end
// nodes; periodic boundaries wrap.
class LinesGrid {
public:
    LinesGrid(const PdeProblem& problem, int cells)
        : problem_(problem), dx_(problem.domain.length() / cells),
          periodic_(problem.boundary == Boundary::periodic), nodes_(periodic_ ? cells : cells + 1)
    {
        x_.resize(nodes_);
        for (std::size_t j = 0; j < nodes_; ++j) {
            x_[j] = problem.domain.lower + dx_ * static_cast<double>(j);
        }
        const std::size_t m_count = problem.components;
        ext_.assign(nodes_ + 4, 0.0);
        ux_.assign(m_count, std::vector<double>(nodes_, 0.0));
        uxx_.assign(m_count, std::vector<double>(nodes_, 0.0));
    }

    std::size_t nodes() const { return nodes_; }
    std::span<const double> x() const { return x_; }
    double dx() const { return dx_; }

    std::vector<std::vector<double>> initial_state() const
    {
        std::vector<std::vector<double>> u(problem_.components, std::vector<double>(nodes_, 0.0));
        for (std::size_t j = 0; j < nodes_; ++j) {
            const auto g = problem_.initial_value(x_[j]);
            for (std::size_t m = 0; m < problem_.components; ++m) {
                u[m][j] = g[m];
            }
        }
        if (!periodic_) {
            for (auto& comp : u) {
                comp.front() = 0.0;
                comp.back() = 0.0;
            }
        }
        return u;
    }

    // Values of u on the ghost-extended grid; ext[j + 2] is node j.
    void extend(const std::vector<double>& u, std::vector<double>& ext) const
    {
        const std::size_t g = nodes_;
        std::copy(u.begin(), u.end(), ext.begin() + 2);
        if (periodic_) {
            ext[1] = u[g - 1];
            ext[0] = u[g - 2];
            ext[g + 2] = u[0];
            ext[g + 3] = u[1];
        } else {
            ext[1] = -u[1];
            ext[0] = -u[2];
            ext[g + 2] = -u[g - 2];
            ext[g + 3] = -u[g - 3];
        }
    }

    void rhs(const std::vector<std::vector<double>>& u, double t, std::vector<std::vector<double>>& out)
    {
        const double inv12dx = 1.0 / (12.0 * dx_);
        const double inv12dx2 = 1.0 / (12.0 * dx_ * dx_);
        for (std::size_t m = 0; m < u.size(); ++m) {
            extend(u[m], ext_);
            const double* e = ext_.data() + 2;
            for (std::size_t j = 0; j < nodes_; ++j) {
                const std::ptrdiff_t i = static_cast<std::ptrdiff_t>(j);
                ux_[m][j] = (e[i - 2] - 8.0 * e[i - 1] + 8.0 * e[i + 1] - e[i + 2]) * inv12dx;
                uxx_[m][j] = (-e[i - 2] + 16.0 * e[i - 1] - 30.0 * e[i] + 16.0 * e[i + 1] - e[i + 2]) * inv12dx2;
            }
        }
        problem_.grid_rhs(GridState{u, ux_, uxx_, t, x_}, out);
        if (!periodic_) {
            for (auto& comp : out) {
                comp.front() = 0.0;
                comp.back() = 0.0;
            }
        }
    }

    // Cubic Lagrange interpolation through the four nodes around x.
    double interpolate(const std::vector<double>& u, double x) const
    {
        std::vector<double> ext(nodes_ + 4);
        extend(u, ext);
        const double s = (x - problem_.domain.lower) / dx_;
        const auto last = static_cast<std::ptrdiff_t>(periodic_ ? nodes_ - 1 : nodes_ - 2);
        const std::ptrdiff_t j = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(std::floor(s)), 0, last);
        const double r = s - static_cast<double>(j);
        const double* e = ext.data() + 2;
        const double w0 = -r * (r - 1.0) * (r - 2.0) / 6.0;
        const double w1 = (r + 1.0) * (r - 1.0) * (r - 2.0) / 2.0;
        const double w2 = -(r + 1.0) * r * (r - 2.0) / 2.0;
        const double w3 = (r + 1.0) * r * (r - 1.0) / 6.0;
        return w0 * e[j - 1] + w1 * e[j] + w2 * e[j + 1] + w3 * e[j + 2];
    }

private:
    const PdeProblem& problem_;
    double dx_;
    bool periodic_;
    std::size_t nodes_;
    std::vector<double> x_;
    std::vector<double> ext_;
    std::vector<std::vector<double>> ux_;
    std::vector<std::vector<double>> uxx_;
};

inline double max_norm(const std::vector<std::vector<double>>& u)
{
    double best = 0.0;
    for (const auto& comp : u) {
        for (double v : comp) {
            best = std::max(best, std::abs(v));
        }
    }
    return best;
}

// Spectral radius of the discrete right-hand side's Jacobian at u, by power
// iteration on finite-difference Jacobian-vector products started from the
// highest grid mode. The geometric mean of the per-step growth is used, which
// stays accurate when the Jacobian is far from normal.
inline double estimate_spectral_radius(LinesGrid& grid, const std::vector<std::vector<double>>& u, double t)
{
    const std::size_t m_count = u.size();
    std::vector<std::vector<double>> v(m_count, std::vector<double>(grid.nodes()));
    for (std::size_t m = 0; m < m_count; ++m) {
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            v[m][j] = ((j % 2 == 0) ? 1.0 : -1.0) * (1.0 + 0.25 * static_cast<double>(m));
        }
    }
    std::vector<std::vector<double>> f0 = u;
    std::vector<std::vector<double>> f1 = u;
    std::vector<std::vector<double>> probe = u;
    grid.rhs(u, t, f0);
    const double delta = 1e-7 * (1.0 + max_norm(u));
    constexpr int iterations = 40;
    double log_growth = 0.0;
    for (int iter = 0; iter < iterations; ++iter) {
        const double vnorm = max_norm(v);
        if (vnorm == 0.0) {
            return 0.0;
        }
        for (std::size_t m = 0; m < m_count; ++m) {
            for (std::size_t j = 0; j < grid.nodes(); ++j) {
                v[m][j] /= vnorm;
                probe[m][j] = u[m][j] + delta * v[m][j];
            }
        }
        grid.rhs(probe, t, f1);
        for (std::size_t m = 0; m < m_count; ++m) {
            for (std::size_t j = 0; j < grid.nodes(); ++j) {
                v[m][j] = (f1[m][j] - f0[m][j]) / delta;
            }
        }
        const double growth = max_norm(v);
        if (growth == 0.0) {
            return 0.0;
        }
        log_growth += std::log(growth);
    }
    return std::exp(log_growth / iterations);
}

} // namespace detail

// Independent reference solution at time t1 for the points X, per component:
// fourth-order central differences in space, classical RK4 in time with a
// step no larger than max_step (smaller when the grid's stiffness demands it),
// cubic interpolation onto X. Intended only for short horizons.
inline std::vector<BatchReal> reference_solve(const PdeProblem& problem, const BatchReal& points, double t1,
                                              const ReferenceOptions& options = {})
{
    if (!(t1 >= 0.0) || t1 > options.max_horizon) {
        throw contract_violation("reference horizon must lie in [0, " + std::to_string(options.max_horizon) + "]");
    }
    if (options.cells < 2048) {
        throw contract_violation("reference grid needs at least 2048 cells");
    }
    for (double x : points) {
        if (!problem.domain.contains_strictly(x)) {
            throw contract_violation("reference point outside the domain");
        }
    }

    detail::LinesGrid grid(problem, options.cells);
    auto u = grid.initial_state();
    const std::size_t m_count = problem.components;

    if (t1 > 0.0) {
        // RK4 is stable for |lambda dt| up to about 2.78 on the negative real
        // axis and 2.83 on the imaginary axis.
        const double radius = detail::estimate_spectral_radius(grid, u, 0.0);
        double dt = options.max_step;
        if (radius > 0.0) {
            dt = std::min(dt, 2.0 / (1.25 * radius));
        }
        const auto steps = static_cast<long>(std::ceil(t1 / dt));
        dt = t1 / static_cast<double>(steps);

        const std::vector<std::vector<double>> zeros(m_count, std::vector<double>(grid.nodes(), 0.0));
        auto k1 = zeros, k2 = zeros, k3 = zeros, k4 = zeros, stage = zeros;
        for (long step = 0; step < steps; ++step) {
            const double t = dt * static_cast<double>(step);
            grid.rhs(u, t, k1);
            for (std::size_t m = 0; m < m_count; ++m) {
                for (std::size_t j = 0; j < grid.nodes(); ++j) {
                    stage[m][j] = u[m][j] + 0.5 * dt * k1[m][j];
                }
            }
            grid.rhs(stage, t + 0.5 * dt, k2);
            for (std::size_t m = 0; m < m_count; ++m) {
                for (std::size_t j = 0; j < grid.nodes(); ++j) {
                    stage[m][j] = u[m][j] + 0.5 * dt * k2[m][j];
                }
            }
            grid.rhs(stage, t + 0.5 * dt, k3);
            for (std::size_t m = 0; m < m_count; ++m) {
                for (std::size_t j = 0; j < grid.nodes(); ++j) {
                    stage[m][j] = u[m][j] + dt * k3[m][j];
                }
            }
            grid.rhs(stage, t + dt, k4);
            bool finite = true;
            for (std::size_t m = 0; m < m_count; ++m) {
                for (std::size_t j = 0; j < grid.nodes(); ++j) {
                    u[m][j] += dt / 6.0 * (k1[m][j] + 2.0 * k2[m][j] + 2.0 * k3[m][j] + k4[m][j]);
                    finite = finite && std::isfinite(u[m][j]);
                }
            }
            if (!finite) {
                throw oracle_failure(problem.name + ": reference state became non-finite at step "
                                     + std::to_string(step));
            }
        }
    }

    std::vector<BatchReal> out;
    for (std::size_t m = 0; m < m_count; ++m) {
        BatchReal values(points.size(), 0.0);
        for (std::size_t p = 0; p < points.size(); ++p) {
            values[p] = grid.interpolate(u[m], points[p]);
        }
        out.push_back(std::move(values));
    }
    return out;
}

} // namespace infdiff
