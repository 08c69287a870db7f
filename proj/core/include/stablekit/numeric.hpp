#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace stablekit {

using cd = std::complex<double>;

// Roots of sum c[k] z^k (lowest degree first) from companion-matrix
// eigenvalues, polished by Newton steps. Leading zeros are ignored.
std::vector<cd> poly_roots(const std::vector<cd>& c);

// Same, polished in extended precision.
std::vector<std::complex<long double>> poly_roots_ld(
    const std::vector<std::complex<long double>>& c);

cd horner(const std::vector<cd>& c, cd z);

// Threads used by parallel loops; 0 selects hardware concurrency.
void set_num_threads(int n);
int num_threads();

// Runs body(i) for i in [0, n). Each index is processed exactly once, so
// results written per index do not depend on the thread count.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace stablekit
