#pragma once

// Numeric layer: control-affine systems dx/dt = M(x) y(t), and the
// Euler-Lagrange flow of a Lagrangian on a classical Lie algebroid
//
//     dx^i/dt = rho^i_a z^a,
//     d/dt(dL/dz^g) + C^a_{g b} z^b dL/dz^a = rho^i_g dL/dx^i.
//
// Structure data stays exact until compiled to doubles for the RK4 loop.
// Costs integrate L by Simpson's rule on the step endpoints, with the
// midpoint state taken from the cubic Hermite interpolant of the step.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "galg/algebroid.hpp"
#include "galg/bundle.hpp"
#include "galg/error.hpp"
#include "galg/expr.hpp"
#include "galg/matrix.hpp"
#include "galg/numeric.hpp"

namespace galg {

class ControlSystem {
public:
    ControlSystem() = default;
    ControlSystem(Chart chart, std::vector<std::string> inputs, FMatrix matrix, Expr lagrangian)
        : chart_(std::move(chart)), inputs_(std::move(inputs)), matrix_(std::move(matrix)),
          lagrangian_(std::move(lagrangian)) {
        const std::size_t n = chart_.dimension();
        if (matrix_.rows() != n || matrix_.cols() != n)
            throw DimensionError("system matrix must be " + std::to_string(n) + "x" + std::to_string(n) + ", got " +
                                 matrix_.shape());
        if (inputs_.size() != n)
            throw DimensionError("system needs " + std::to_string(n) + " inputs, got " + std::to_string(inputs_.size()));
        std::vector<std::string> names = chart_.coords();
        names.insert(names.end(), inputs_.begin(), inputs_.end());
        for (const auto& in : inputs_)
            if (std::count(names.begin(), names.end(), in) != 1)
                throw InvariantError("input name '" + in + "' clashes with another declared name");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (const auto& v : matrix_(i, j).variables())
                    if (std::find(chart_.coords().begin(), chart_.coords().end(), v) == chart_.coords().end())
                        throw InvariantError("system matrix entry uses '" + v + "', not a coordinate");
        for (const auto& v : lagrangian_.variables())
            if (std::find(names.begin(), names.end(), v) == names.end())
                throw InvariantError("Lagrangian uses undeclared name '" + v + "'");
    }

    const Chart& chart() const noexcept { return chart_; }
    const std::vector<std::string>& inputs() const noexcept { return inputs_; }
    const FMatrix& matrix() const noexcept { return matrix_; }
    const Expr& lagrangian() const noexcept { return lagrangian_; }

private:
    Chart chart_;
    std::vector<std::string> inputs_;
    FMatrix matrix_;
    Expr lagrangian_;
};

/// Parallel per-sample arrays; cost is cumulative.
struct Trajectory {
    std::vector<std::string> state_names;
    std::vector<std::string> velocity_names;
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<std::vector<double>> velocities;
    std::vector<double> energy;
    std::vector<double> cost;

    std::size_t size() const noexcept { return times.size(); }

    /// Header t,<states>,<velocities>,E,cost; values with 12 significant digits.
    void write_csv(std::ostream& os) const {
        os << 't';
        for (const auto& s : state_names) os << ',' << s;
        for (const auto& s : velocity_names) os << ',' << s;
        os << ",E,cost\n";
        char buf[32];
        auto put = [&](double v) {
            std::snprintf(buf, sizeof buf, "%.12g", v);
            os << buf;
        };
        for (std::size_t k = 0; k < times.size(); ++k) {
            put(times[k]);
            for (double v : states[k]) os << ',', put(v);
            for (double v : velocities[k]) os << ',', put(v);
            os << ',';
            put(energy[k]);
            os << ',';
            put(cost[k]);
            os << '\n';
        }
    }
};

namespace detail {

inline std::string format_state(double t, const std::vector<double>& x) {
    std::ostringstream os;
    os.precision(12);
    os << "t = " << t << ", state = (";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << ')';
    return os.str();
}

/// Everything the fixed-step driver needs about one flow.
struct Flow {
    std::size_t state_size = 0;
    std::function<void(double, const std::vector<double>&, std::vector<double>&)> rhs;
    // Splits a state into the (x, z) columns recorded in the trajectory.
    std::function<void(double, const std::vector<double>&, std::vector<double>&, std::vector<double>&)> sample;
    std::function<double(const std::vector<double>&, const std::vector<double>&)> lagrangian;
    std::function<double(const std::vector<double>&, const std::vector<double>&)> energy;
};

inline std::size_t step_count(double horizon, double dt) {
    if (!(dt > 0) || !(horizon > 0) || !std::isfinite(dt) || !std::isfinite(horizon))
        throw DomainError("horizon and step must be positive and finite");
    const double n = std::round(horizon / dt);
    return n < 1 ? 1 : static_cast<std::size_t>(n);
}

inline Trajectory run_rk4(const Flow& flow, std::vector<double> y, double horizon, double dt) {
    const std::size_t steps = step_count(horizon, dt);
    const double h = horizon / static_cast<double>(steps);
    const std::size_t m = flow.state_size;

    Trajectory tr;
    tr.times.reserve(steps + 1);
    std::vector<double> x, z;
    double total = 0;
    auto record = [&](double t, const std::vector<double>& state, double cost) {
        flow.sample(t, state, x, z);
        tr.times.push_back(t);
        tr.states.push_back(x);
        tr.velocities.push_back(z);
        tr.energy.push_back(flow.energy(x, z));
        tr.cost.push_back(cost);
    };

    auto eval = [&](double t, const std::vector<double>& s, std::vector<double>& out) {
        try {
            flow.rhs(t, s, out);
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " at " + format_state(t, s));
        }
    };

    std::vector<double> k1(m), k2(m), k3(m), k4(m), tmp(m), next(m), f_next(m), mid(m);
    eval(0, y, k1);
    record(0, y, 0);
    flow.sample(0, y, x, z);
    double l0 = flow.lagrangian(x, z);
    for (std::size_t n = 0; n < steps; ++n) {
        const double t = h * static_cast<double>(n);
        for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        eval(t + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        eval(t + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * k3[i];
        eval(t + h, tmp, k4);
        for (std::size_t i = 0; i < m; ++i) next[i] = y[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        const double t1 = h * static_cast<double>(n + 1);
        eval(t1, next, f_next);

        for (std::size_t i = 0; i < m; ++i) mid[i] = 0.5 * (y[i] + next[i]) + h / 8 * (k1[i] - f_next[i]);
        flow.sample(t + 0.5 * h, mid, x, z);
        const double lm = flow.lagrangian(x, z);
        flow.sample(t1, next, x, z);
        const double l1 = flow.lagrangian(x, z);
        total += h / 6 * (l0 + 4 * lm + l1);

        y.swap(next);
        k1.swap(f_next);
        l0 = l1;
        record(t1, y, total);
    }
    return tr;
}

/// E = z . dL/dz - L as an exact expression.
inline Expr energy_expr(const Expr& lagrangian, const std::vector<std::string>& velocities) {
    Expr e = -lagrangian;
    for (const auto& v : velocities) e += Expr::variable(v) * differentiate(lagrangian, v);
    return e;
}

} // namespace detail

using Controls = std::function<std::vector<double>(double)>;

/// RK4 trajectory of dx/dt = M(x) y(t); velocities record y(t).
inline Trajectory integrate(const ControlSystem& sys, const Controls& controls, const std::vector<double>& x0,
                            double horizon, double dt) {
    const std::size_t n = sys.chart().dimension();
    if (x0.size() != n)
        throw DimensionError("initial state needs " + std::to_string(n) + " values, got " + std::to_string(x0.size()));
    std::vector<std::string> order = sys.chart().coords();
    order.insert(order.end(), sys.inputs().begin(), sys.inputs().end());

    std::vector<CompiledExpr> m;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.emplace_back(sys.matrix()(i, j), sys.chart().coords());
    const CompiledExpr lag(sys.lagrangian(), order);
    const CompiledExpr energy(detail::energy_expr(sys.lagrangian(), sys.inputs()), order);

    auto inputs_at = [&](double t) {
        std::vector<double> y = controls(t);
        if (y.size() != n) throw DimensionError("controls returned " + std::to_string(y.size()) + " values");
        return y;
    };
    std::vector<double> buf(2 * n);
    auto joint = [&](const std::vector<double>& x, const std::vector<double>& y) -> const std::vector<double>& {
        std::copy(x.begin(), x.end(), buf.begin());
        std::copy(y.begin(), y.end(), buf.begin() + static_cast<std::ptrdiff_t>(n));
        return buf;
    };

    detail::Flow flow;
    flow.state_size = n;
    flow.rhs = [&](double t, const std::vector<double>& x, std::vector<double>& dx) {
        const std::vector<double> y = inputs_at(t);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (y[j] != 0 && !m[i * n + j].is_zero()) s += m[i * n + j](x) * y[j];
            dx[i] = s;
        }
    };
    flow.sample = [&](double t, const std::vector<double>& state, std::vector<double>& x, std::vector<double>& z) {
        x = state;
        z = inputs_at(t);
    };
    flow.lagrangian = [&](const std::vector<double>& x, const std::vector<double>& y) { return lag(joint(x, y)); };
    flow.energy = [&](const std::vector<double>& x, const std::vector<double>& y) { return energy(joint(x, y)); };

    Trajectory tr = detail::run_rk4(flow, x0, horizon, dt);
    tr.state_names = sys.chart().coords();
    tr.velocity_names = sys.inputs();
    return tr;
}

/// A regular Lagrangian on a classical Lie algebroid with initial data.
class ELProblem {
public:
    ELProblem() = default;
    ELProblem(AlgebroidModel model, std::vector<std::string> velocities, Expr lagrangian, std::vector<double> x0,
              std::vector<double> z0, double horizon = 1, double step = 1e-3)
        : model_(std::move(model)), velocities_(std::move(velocities)), lagrangian_(std::move(lagrangian)),
          x0_(std::move(x0)), z0_(std::move(z0)), horizon_(horizon), step_(step) {
        if (!model_.is_classical()) throw InvariantError("Euler-Lagrange flow needs h = eta = Id");
        const std::size_t r = model_.rank(), n = model_.dimension();
        if (velocities_.size() != r)
            throw DimensionError("need " + std::to_string(r) + " velocity names, got " + std::to_string(velocities_.size()));
        if (x0_.size() != n) throw DimensionError("x0 needs " + std::to_string(n) + " values");
        if (z0_.size() != r) throw DimensionError("z0 needs " + std::to_string(r) + " values");
        std::vector<std::string> names = model_.base().coords();
        names.insert(names.end(), velocities_.begin(), velocities_.end());
        for (const auto& v : velocities_)
            if (std::count(names.begin(), names.end(), v) != 1)
                throw InvariantError("velocity name '" + v + "' clashes with another declared name");
        for (const auto& v : lagrangian_.variables())
            if (std::find(names.begin(), names.end(), v) == names.end())
                throw InvariantError("Lagrangian uses undeclared name '" + v + "'");
        FMatrix hess(r, r);
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < r; ++b)
                hess(a, b) = differentiate(differentiate(lagrangian_, velocities_[a]), velocities_[b]);
        if (determinant(hess).is_zero())
            throw InvariantError("Lagrangian is not regular: velocity Hessian determinant vanishes identically");
        detail::step_count(horizon_, step_);
    }

    const AlgebroidModel& model() const noexcept { return model_; }
    const std::vector<std::string>& velocities() const noexcept { return velocities_; }
    const Expr& lagrangian() const noexcept { return lagrangian_; }
    const std::vector<double>& x0() const noexcept { return x0_; }
    const std::vector<double>& z0() const noexcept { return z0_; }
    double horizon() const noexcept { return horizon_; }
    double step() const noexcept { return step_; }

    ELProblem with_step(double dt) const {
        ELProblem p = *this;
        detail::step_count(p.horizon_, dt);
        p.step_ = dt;
        return p;
    }

private:
    AlgebroidModel model_;
    std::vector<std::string> velocities_;
    Expr lagrangian_;
    std::vector<double> x0_, z0_;
    double horizon_ = 1;
    double step_ = 1e-3;
};

/// Compiled Euler-Lagrange vector field on states (x, z).
class ELDynamics {
public:
    explicit ELDynamics(const ELProblem& p) : n_(p.model().dimension()), r_(p.model().rank()) {
        order_ = p.model().base().coords();
        order_.insert(order_.end(), p.velocities().begin(), p.velocities().end());
        const AlgebroidModel& a = p.model();
        const Expr& l = p.lagrangian();
        for (std::size_t al = 0; al < r_; ++al)
            for (std::size_t i = 0; i < n_; ++i) rho_.emplace_back(a.anchor()(al, i), order_);
        for (std::size_t g = 0; g < r_; ++g)
            for (std::size_t al = 0; al < r_; ++al)
                for (std::size_t be = 0; be < r_; ++be) c_.emplace_back(a.structure()(g, al, be), order_);
        std::vector<Expr> dl_dz;
        for (const auto& v : p.velocities()) dl_dz.push_back(differentiate(l, v));
        for (std::size_t i = 0; i < n_; ++i) dl_dx_.emplace_back(differentiate(l, a.base().coord(i)), order_);
        for (std::size_t g = 0; g < r_; ++g) {
            dl_dz_.emplace_back(dl_dz[g], order_);
            for (std::size_t b = 0; b < r_; ++b) hess_.emplace_back(differentiate(dl_dz[g], p.velocities()[b]), order_);
            for (std::size_t i = 0; i < n_; ++i) mixed_.emplace_back(differentiate(dl_dz[g], a.base().coord(i)), order_);
        }
        lag_ = CompiledExpr(l, order_);
        energy_ = CompiledExpr(detail::energy_expr(l, p.velocities()), order_);
    }

    std::size_t dimension() const noexcept { return n_; }
    std::size_t rank() const noexcept { return r_; }

    /// `state` = (x, z); writes (dx/dt, dz/dt).  DomainError on a singular Hessian.
    void operator()(const std::vector<double>& state, std::vector<double>& out) const {
        out.assign(n_ + r_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0;
            for (std::size_t al = 0; al < r_; ++al) s += rho_[al * n_ + i](state) * state[n_ + al];
            out[i] = s;
        }
        std::vector<double> dz(r_), h(r_ * r_), dl_dz(r_), dl_dx(n_);
        for (std::size_t a = 0; a < r_; ++a) dl_dz[a] = dl_dz_[a](state);
        for (std::size_t i = 0; i < n_; ++i) dl_dx[i] = dl_dx_[i](state);
        for (std::size_t g = 0; g < r_; ++g) {
            double s = 0;
            for (std::size_t i = 0; i < n_; ++i) s += rho_[g * n_ + i](state) * dl_dx[i] - mixed_[g * n_ + i](state) * out[i];
            for (std::size_t a = 0; a < r_; ++a)
                for (std::size_t b = 0; b < r_; ++b) {
                    const CompiledExpr& c = c_[(a * r_ + g) * r_ + b];
                    if (!c.is_zero()) s -= c(state) * state[n_ + b] * dl_dz[a];
                }
            dz[g] = s;
            for (std::size_t b = 0; b < r_; ++b) h[g * r_ + b] = hess_[g * r_ + b](state);
        }
        if (!solve_linear(h, dz, r_)) throw DomainError("singular velocity Hessian");
        for (std::size_t g = 0; g < r_; ++g) out[n_ + g] = dz[g];
    }

    double lagrangian(const std::vector<double>& state) const { return lag_(state); }
    double energy(const std::vector<double>& state) const { return energy_(state); }

private:
    std::size_t n_, r_;
    std::vector<std::string> order_;
    std::vector<CompiledExpr> rho_, c_, dl_dx_, dl_dz_, hess_, mixed_;
    CompiledExpr lag_, energy_;
};

/// (dx/dt, dz/dt) at one state.
inline std::pair<std::vector<double>, std::vector<double>> el_rhs(const ELProblem& p, const std::vector<double>& x,
                                                                   const std::vector<double>& z) {
    const ELDynamics dyn(p);
    if (x.size() != dyn.dimension() || z.size() != dyn.rank()) throw DimensionError("state has wrong size");
    std::vector<double> state = x, out;
    state.insert(state.end(), z.begin(), z.end());
    try {
        dyn(state, out);
    } catch (const DomainError& e) {
        throw DomainError(std::string(e.what()) + " at " + detail::format_state(0, state));
    }
    const auto split = out.begin() + static_cast<std::ptrdiff_t>(x.size());
    return {std::vector<double>(out.begin(), split), std::vector<double>(split, out.end())};
}

inline Trajectory solve_el(const ELProblem& p) {
    const ELDynamics dyn(p);
    const std::size_t n = dyn.dimension(), r = dyn.rank();
    std::vector<double> buf(n + r);
    auto joint = [&](const std::vector<double>& x, const std::vector<double>& z) -> const std::vector<double>& {
        std::copy(x.begin(), x.end(), buf.begin());
        std::copy(z.begin(), z.end(), buf.begin() + static_cast<std::ptrdiff_t>(n));
        return buf;
    };
    detail::Flow flow;
    flow.state_size = n + r;
    flow.rhs = [&](double, const std::vector<double>& s, std::vector<double>& out) { dyn(s, out); };
    flow.sample = [&](double, const std::vector<double>& s, std::vector<double>& x, std::vector<double>& z) {
        x.assign(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n));
        z.assign(s.begin() + static_cast<std::ptrdiff_t>(n), s.end());
    };
    flow.lagrangian = [&](const std::vector<double>& x, const std::vector<double>& z) { return dyn.lagrangian(joint(x, z)); };
    flow.energy = [&](const std::vector<double>& x, const std::vector<double>& z) { return dyn.energy(joint(x, z)); };

    std::vector<double> y0 = p.x0();
    y0.insert(y0.end(), p.z0().begin(), p.z0().end());
    Trajectory tr = detail::run_rk4(flow, std::move(y0), p.horizon(), p.step());
    tr.state_names = p.model().base().coords();
    tr.velocity_names = p.velocities();
    return tr;
}

/// max |E(t) - E(0)| over the samples.
inline double energy_drift(const Trajectory& tr) {
    double d = 0;
    for (double e : tr.energy) d = std::max(d, std::abs(e - tr.energy.front()));
    return d;
}

/// Observed order log2(e(dt) / e(dt/2)), errors measured against a dt/4
/// run at the shared sample times over the full (x, z) state.
inline double observed_order(const ELProblem& p, double dt) {
    const Trajectory a = solve_el(p.with_step(dt));
    const Trajectory b = solve_el(p.with_step(dt / 2));
    const Trajectory ref = solve_el(p.with_step(dt / 4));
    auto error = [&](const Trajectory& t, std::size_t stride) {
        double e = 0;
        for (std::size_t k = 0; k < t.size(); ++k) {
            const std::size_t kr = k * stride;
            for (std::size_t i = 0; i < t.states[k].size(); ++i)
                e = std::max(e, std::abs(t.states[k][i] - ref.states[kr][i]));
            for (std::size_t i = 0; i < t.velocities[k].size(); ++i)
                e = std::max(e, std::abs(t.velocities[k][i] - ref.velocities[kr][i]));
        }
        return e;
    };
    return std::log2(error(a, 4) / error(b, 2));
}

/// True iff M_B = (J_phi M_A) o phi^{-1} exactly, for phi from A's chart to B's.
inline bool verify_transform(const ControlSystem& a, const ControlSystem& b, const CoordMap& phi) {
    if (!(phi.source() == a.chart()) || !(phi.target() == b.chart())) return false;
    if (a.chart().dimension() != b.chart().dimension() || a.inputs().size() != b.inputs().size()) return false;
    const FMatrix pushed = (phi.jacobian() * a.matrix()).map([&](const Expr& e) { return phi.pushforward(e); });
    return pushed == b.matrix();
}

} // namespace galg
