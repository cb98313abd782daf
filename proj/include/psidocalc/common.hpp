// Shared small utilities: multi-indices, a portable seeded RNG, hashing,
// and the thread cap read from PSIDO_THREADS.
#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace psido {

using complexd = std::complex<double>;
using VecD = std::vector<double>;
using Span = std::span<const double>;

// Multi-index over a fixed number of variables.
using Multi = std::vector<unsigned>;

inline unsigned multi_order(const Multi& a) {
    unsigned s = 0;
    for (unsigned v : a) s += v;
    return s;
}

double multi_factorial(const Multi& a);

// All multi-indices of length `len` with |alpha| == k, graded-lex order.
std::vector<Multi> multis_of_order(int len, int k);
// All with |alpha| <= kmax, ordered by total order then lex.
std::vector<Multi> multis_up_to(int len, int kmax);

std::string multi_str(const Multi& a);

// splitmix64: portable, deterministic across platforms. We do not use
// std::uniform_real_distribution because its output is implementation
// defined and reports must be reproducible byte for byte.
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed + 0x9e3779b97f4a7c15ULL) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + int(next() % uint64_t(hi - lo + 1));
    }
};

uint64_t fnv1a64(const std::string& s);
std::string hex64(uint64_t v);

// Thread cap from PSIDO_THREADS (default 1: deterministic single-threaded).
int thread_cap();

// Runs f(i) for i in [0,n). Parallel only when thread_cap() > 1; the loop
// bodies must write to disjoint state.
void parallel_for(int n, const std::function<void(int)>& f);

double norm2(Span z);

// least-squares slope of y against x
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace psido
