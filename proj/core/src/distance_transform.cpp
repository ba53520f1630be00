#include "potalign/distance_transform.hpp"

#include <cmath>
#include <limits>

namespace potalign {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D squared-distance transform of a sampled function f.
void dt_1d(const std::vector<double>& f, std::vector<double>& out,
           std::vector<int>& v, std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = 1; q < n; ++q) {
        double s = 0;
        while (true) {
            s = ((f[q] + q * static_cast<double>(q)) - (f[v[k]] + v[k] * static_cast<double>(v[k]))) /
                (2.0 * q - 2.0 * v[k]);
            if (s <= z[k]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double d = q - static_cast<double>(v[k]);
        out[q] = d * d + f[v[k]];
    }
}

}  // namespace

std::vector<double> distance_transform(const BinaryMask& mask) {
    const int w = mask.width(), h = mask.height();
    std::vector<double> sq(static_cast<size_t>(w) * h, kInf);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (mask.at(x, y)) sq[static_cast<size_t>(y) * w + x] = 0.0;

    const int m = std::max(w, h);
    std::vector<double> f(m), out(m), z(m + 1);
    std::vector<int> v(m);

    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) f[y] = sq[static_cast<size_t>(y) * w + x];
        f.resize(h);
        out.resize(h);
        dt_1d(f, out, v, z);
        for (int y = 0; y < h; ++y) sq[static_cast<size_t>(y) * w + x] = out[y];
        f.resize(m);
        out.resize(m);
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) f[x] = sq[static_cast<size_t>(y) * w + x];
        f.resize(w);
        out.resize(w);
        dt_1d(f, out, v, z);
        for (int x = 0; x < w; ++x) sq[static_cast<size_t>(y) * w + x] = out[x];
        f.resize(m);
        out.resize(m);
    }
    for (double& d : sq) d = std::sqrt(d);
    return sq;
}

}  // namespace potalign
