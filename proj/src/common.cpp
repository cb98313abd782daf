#include "psidocalc/common.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace psido {

double multi_factorial(const Multi& a) {
    double f = 1.0;
    for (unsigned v : a)
        for (unsigned k = 2; k <= v; ++k) f *= double(k);
    return f;
}

static void multis_rec(int len, int pos, int remaining, Multi& cur, std::vector<Multi>& out) {
    if (pos == len - 1) {
        cur[pos] = unsigned(remaining);
        out.push_back(cur);
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        cur[pos] = unsigned(v);
        multis_rec(len, pos + 1, remaining - v, cur, out);
    }
}

std::vector<Multi> multis_of_order(int len, int k) {
    std::vector<Multi> out;
    if (len <= 0) return out;
    Multi cur(size_t(len), 0u);
    multis_rec(len, 0, k, cur, out);
    return out;
}

std::vector<Multi> multis_up_to(int len, int kmax) {
    std::vector<Multi> out;
    for (int k = 0; k <= kmax; ++k) {
        auto part = multis_of_order(len, k);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

std::string multi_str(const Multi& a) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
    os << ")";
    return os.str();
}

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(uint64_t v) {
    static const char* d = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[size_t(i)] = d[v & 0xF];
        v >>= 4;
    }
    return s;
}

int thread_cap() {
    const char* e = std::getenv("PSIDO_THREADS");
    if (!e) return 1;
    int v = std::atoi(e);
    if (v < 1) return 1;
    int hw = int(std::thread::hardware_concurrency());
    if (hw > 0 && v > hw) v = hw;
    return v;
}

void parallel_for(int n, const std::function<void(int)>& f) {
    int nt = thread_cap();
    if (nt <= 1 || n < 2 * nt) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(size_t(nt));
    for (int t = 0; t < nt; ++t) {
        threads.emplace_back([=, &f]() {
            for (int i = t; i < n; i += nt) f(i);
        });
    }
    for (auto& th : threads) th.join();
}

double norm2(Span z) {
    double s = 0;
    for (double v : z) s += v * v;
    return std::sqrt(s);
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    size_t n = x.size();
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0 ? sxy / sxx : 0.0;
}

}  // namespace psido
