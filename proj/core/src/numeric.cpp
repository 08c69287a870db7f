#include "stablekit/numeric.hpp"

#include <Eigen/Eigenvalues>

#include <atomic>
#include <stdexcept>
#include <thread>

namespace stablekit {

namespace {

std::atomic<int> g_threads{1};

template <class T>
std::complex<T> horner_t(const std::vector<std::complex<T>>& c, std::complex<T> z) {
  std::complex<T> acc = 0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
  return acc;
}

template <class T>
std::complex<T> horner_deriv(const std::vector<std::complex<T>>& c, std::complex<T> z) {
  std::complex<T> acc = 0;
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * z + c[k] * static_cast<T>(k);
  return acc;
}

template <class T>
void polish(const std::vector<std::complex<T>>& c, std::complex<T>& z) {
  for (int it = 0; it < 8; ++it) {
    std::complex<T> f = horner_t(c, z), df = horner_deriv(c, z);
    if (std::abs(df) == T(0)) return;
    std::complex<T> step = f / df;
    std::complex<T> cand = z - step;
    if (std::abs(horner_t(c, cand)) > std::abs(f)) return;
    z = cand;
    if (std::abs(step) <= std::numeric_limits<T>::epsilon() * std::max(T(1), std::abs(z))) return;
  }
}

std::vector<cd> companion_roots(const std::vector<cd>& c_in) {
  std::vector<cd> c = c_in;
  while (!c.empty() && c.back() == cd(0)) c.pop_back();
  if (c.size() <= 1) return {};
  std::size_t zeros = 0;
  while (zeros < c.size() && c[zeros] == cd(0)) ++zeros;
  std::vector<cd> roots(zeros, cd(0));
  std::vector<cd> d(c.begin() + static_cast<long>(zeros), c.end());
  int n = static_cast<int>(d.size()) - 1;
  if (n <= 0) return roots;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) m(i, n - 1) = -d[i] / d[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue solver failed");
  for (int i = 0; i < n; ++i) roots.push_back(es.eigenvalues()[i]);
  return roots;
}

}  // namespace

cd horner(const std::vector<cd>& c, cd z) { return horner_t(c, z); }

std::vector<cd> poly_roots(const std::vector<cd>& c) {
  std::vector<cd> roots = companion_roots(c);
  std::vector<cd> trimmed = c;
  while (!trimmed.empty() && trimmed.back() == cd(0)) trimmed.pop_back();
  for (cd& z : roots)
    if (z != cd(0)) polish(trimmed, z);
  return roots;
}

std::vector<std::complex<long double>> poly_roots_ld(
    const std::vector<std::complex<long double>>& c) {
  std::vector<cd> cdv;
  for (const auto& x : c) cdv.emplace_back(static_cast<double>(x.real()), static_cast<double>(x.imag()));
  std::vector<cd> approx = companion_roots(cdv);
  std::vector<std::complex<long double>> trimmed = c;
  while (!trimmed.empty() && trimmed.back() == std::complex<long double>(0)) trimmed.pop_back();
  std::vector<std::complex<long double>> out;
  for (cd z : approx) {
    std::complex<long double> w(z.real(), z.imag());
    if (w != std::complex<long double>(0)) polish(trimmed, w);
    out.push_back(w);
  }
  return out;
}

void set_num_threads(int n) {
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  g_threads = n;
}

int num_threads() { return g_threads; }

void parallel_for(int n, const std::function<void(int)>& body) {
  int t = std::min(num_threads(), n);
  if (t <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (int k = 0; k < t; ++k)
    pool.emplace_back([&] {
      while (true) {
        int i = next++;
        if (i >= n || failed) return;
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace stablekit
