// Euler-Lagrange flow of L = (z1^2 + z2^2)/2 on the rank-2 algebroid with
// [t1, t2] = t1, compared with z = (sech t, tanh t), x = (sinh t, 0, log cosh t).

#include <cmath>
#include <cstdio>

#include "galg/galg.hpp"

int main() {
    using namespace galg;
    const Chart sigma("Sigma", {"x1", "x2", "x3"});
    const Expr x1 = Expr::variable("x1"), x2 = Expr::variable("x2");
    const Expr z1 = Expr::variable("z1"), z2 = Expr::variable("z2");
    StructureFunctions c(2);
    c.set(0, 0, 1, 1);
    const AlgebroidModel model =
        AlgebroidModel::classical(Bundle(sigma, {"t1", "t2"}), FMatrix{{1, 0, 0}, {x1, x2, 1}}, c);
    const ELProblem p(model, {"z1", "z2"}, Expr(Rational(1, 2)) * (z1 * z1 + z2 * z2), {0, 0, 0}, {1, 0}, 5, 1e-3);

    const Trajectory tr = solve_el(p);
    std::printf("%6s %14s %14s %14s %10s\n", "t", "z1", "sech t", "x3 - logcosh", "E");
    for (std::size_t k = 0; k < tr.size(); k += 500) {
        const double t = tr.times[k];
        std::printf("%6.2f %14.10f %14.10f %14.3e %10.7f\n", t, tr.velocities[k][0], 1 / std::cosh(t),
                    tr.states[k][2] - std::log(std::cosh(t)), tr.energy[k]);
    }
    std::printf("energy drift %.3e, observed order %.3f\n", energy_drift(tr), observed_order(p, 0.02));
}
