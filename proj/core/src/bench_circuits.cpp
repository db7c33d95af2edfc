#include "mech/bench_circuits.hpp"

#include <algorithm>
#include <cmath>

namespace mech {

namespace {
constexpr double kPi = 3.14159265358979323846;

/// RY(theta) in the RZ/H basis: RZ(pi/2) H RZ(theta) H RZ(-pi/2).
void emit_ry(Circuit& c, QubitId q, double theta) {
    c.rz(q, -kPi / 2);
    c.h(q);
    c.rz(q, theta);
    c.h(q);
    c.rz(q, kPi / 2);
}
}  // namespace

Circuit gen_qft(int n) {
    require(n >= 2, "gen_qft: n >= 2");
    Circuit c(n);
    for (int i = 0; i < n; ++i) {
        c.h(i);
        for (int j = i + 1; j < n; ++j) c.cp(j, i, kPi / std::pow(2.0, j - i));
    }
    return c;
}

Circuit gen_qaoa(int n, uint64_t seed) {
    require(n >= 2, "gen_qaoa: n >= 2");
    Rng rng(seed);
    const long total = static_cast<long>(n) * (n - 1) / 2;
    const long want = total / 2;  // floor(n(n-1)/4)
    // sample `want` distinct edge indices
    std::vector<long> picks;
    {
        std::vector<long> all(total);
        for (long i = 0; i < total; ++i) all[i] = i;
        for (long i = 0; i < want; ++i) {
            const long j = i + rng.next_below(static_cast<int>(total - i));
            std::swap(all[i], all[j]);
            picks.push_back(all[i]);
        }
        std::sort(picks.begin(), picks.end());
    }
    auto edge_of = [n](long idx) {
        // row-major upper triangle
        long a = 0, row = n - 1;
        while (idx >= row) {
            idx -= row;
            --row;
            ++a;
        }
        return std::pair<int, int>(static_cast<int>(a), static_cast<int>(a + 1 + idx));
    };
    Circuit c(n);
    for (long idx : picks) {
        const auto [a, b] = edge_of(idx);
        const double gamma = 2.0 * kPi * rng.next_double();
        c.cx(a, b);
        c.rz(b, gamma);
        c.cx(a, b);
    }
    return c;
}

Circuit gen_vqe(int n, int layers, uint64_t seed) {
    require(n >= 2 && layers >= 1, "gen_vqe: n >= 2 and layers >= 1");
    Rng rng(seed);
    Circuit c(n);
    for (int l = 0; l < layers; ++l) {
        for (int q = 0; q < n; ++q) emit_ry(c, q, 2.0 * kPi * rng.next_double());
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) c.cx(i, j);
    }
    for (int q = 0; q < n; ++q) emit_ry(c, q, 2.0 * kPi * rng.next_double());
    return c;
}

std::vector<int> bv_secret(int n, uint64_t seed) {
    require(n >= 2, "gen_bv: n >= 2");
    Rng rng(seed);
    const int len = n - 1;
    const int ones = len / 2;
    std::vector<int> s(len, 0);
    std::vector<int> idx(len);
    for (int i = 0; i < len; ++i) idx[i] = i;
    for (int i = 0; i < ones; ++i) {
        const int j = i + rng.next_below(len - i);
        std::swap(idx[i], idx[j]);
        s[idx[i]] = 1;
    }
    return s;
}

Circuit gen_bv(int n, uint64_t seed) {
    const auto secret = bv_secret(n, seed);
    Circuit c(n);
    const int target = n - 1;
    c.x(target);
    for (int q = 0; q < n; ++q) c.h(q);
    for (int q = 0; q < n - 1; ++q)
        if (secret[q]) c.cx(q, target);
    for (int q = 0; q < n - 1; ++q) c.h(q);
    for (int q = 0; q < n - 1; ++q) c.measure(q, Basis::Z);
    return c;
}

}  // namespace mech
