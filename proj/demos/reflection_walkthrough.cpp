// Prints the symbolic pieces of the reflected control system: the
// factorization, the Gram data of R, its left inverse and the checks.

#include <iostream>

#include "galg/galg.hpp"

int main() {
    using namespace galg;
    const ReflectionExample d = reflection_example();
    std::cout << "M  = " << d.original.matrix().to_string() << '\n'
              << "M~ = " << d.transformed.matrix().to_string() << '\n'
              << "G  = " << d.factor_g.to_string() << '\n'
              << "P  = " << d.anchor_p.to_string() << '\n'
              << "G P == M~: " << std::boolalpha << (d.factor_g * d.anchor_p == d.transformed.matrix()) << '\n'
              << "det M~ = " << determinant(d.transformed.matrix()).to_string() << '\n';

    const FMatrix gram = d.reduction_r.transpose() * d.reduction_r;
    std::cout << "R^t R = " << gram.to_string() << '\n'
              << "det   = " << determinant(gram).to_string() << '\n'
              << "R_left^-1 = " << left_pseudo_inverse(d.reduction_r).to_string() << "\n\n";
    write_text(std::cout, verify_paper(d));
}
