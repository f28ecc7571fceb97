#include "sga/c_transform.hpp"

#include <cmath>
#include <limits>

#include "sga/parallel.hpp"

namespace sga {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

void envelope_transform_1d(std::span<const double> pos, std::span<const double> src,
                           std::span<double> out, std::span<std::int32_t> argmin) {
    const int n = static_cast<int>(pos.size());
    std::vector<int> hull(n);
    std::vector<double> bound(n + 1);

    // Intersection abscissa of parabolas rooted at pos[p] and pos[q], p < q.
    auto intersect = [&](int p, int q) {
        const double ap = src[p] + 0.5 * pos[p] * pos[p];
        const double aq = src[q] + 0.5 * pos[q] * pos[q];
        return (aq - ap) / (pos[q] - pos[p]);
    };

    int k = 0;
    hull[0] = 0;
    bound[0] = -kInf;
    bound[1] = kInf;
    for (int q = 1; q < n; ++q) {
        double s = intersect(hull[k], q);
        // A tie at the current boundary drops the later parabola, so the
        // earliest index owns the boundary point.
        while (s <= bound[k]) {
            --k;
            s = intersect(hull[k], q);
        }
        ++k;
        hull[k] = q;
        bound[k] = s;
        bound[k + 1] = kInf;
    }

    k = 0;
    for (int x = 0; x < n; ++x) {
        while (bound[k + 1] < pos[x]) ++k;
        const int p = hull[k];
        const double dx = pos[x] - pos[p];
        const double t = 0.5 * dx * dx;
        out[x] = t + src[p];
        argmin[x] = static_cast<std::int32_t>(p);
    }
}

void brute_transform_1d(std::span<const double> pos, std::span<const double> src,
                        std::span<double> out, std::span<std::int32_t> argmin) {
    const int n = static_cast<int>(pos.size());
    for (int x = 0; x < n; ++x) {
        double best = kInf;
        int besty = 0;
        for (int y = 0; y < n; ++y) {
            const double dx = pos[x] - pos[y];
            const double t = 0.5 * dx * dx;
            const double v = t + src[y];
            if (v < best) {
                best = v;
                besty = y;
            }
        }
        out[x] = best;
        argmin[x] = static_cast<std::int32_t>(besty);
    }
}

CTransformResult c_transform_fast(const PotentialField& f) {
    require_finite(f.values, "c_transform_fast");
    const GridSpec& g = f.grid;
    const std::size_t n = g.size();

    std::vector<double> cur(n);
    for (std::size_t i = 0; i < n; ++i) cur[i] = -f.values[i];

    // Per-pass argmin tables; table j is indexed by (x_1..x_j, y_{j+1}..y_d).
    std::vector<std::vector<std::int32_t>> table(g.dim);

    for (int j = 0; j < g.dim; ++j) {
        const int nj = g.shape[j];
        std::size_t stride = 1;
        for (int k = j + 1; k < g.dim; ++k) stride *= g.shape[k];
        const std::size_t nlines = n / static_cast<std::size_t>(nj);

        std::vector<double> pos(nj);
        for (int p = 0; p < nj; ++p) pos[p] = g.center(j, p);

        std::vector<double> next(n);
        table[j].resize(n);
        auto& tab = table[j];

        parallel_for(0, nlines, [&](std::size_t line) {
            const std::size_t outer = line / stride;
            const std::size_t inner = line % stride;
            const std::size_t base = outer * static_cast<std::size_t>(nj) * stride + inner;
            std::vector<double> buf(nj), obuf(nj);
            std::vector<std::int32_t> am(nj);
            for (int p = 0; p < nj; ++p) buf[p] = cur[base + p * stride];
            envelope_transform_1d(pos, buf, obuf, am);
            for (int p = 0; p < nj; ++p) {
                next[base + p * stride] = obuf[p];
                tab[base + p * stride] = am[p];
            }
        });
        cur.swap(next);
    }

    CTransformResult res;
    res.fc = PotentialField(g, std::move(cur));
    res.argmin.resize(n);
    auto& out = res.argmin;
    parallel_for(0, n, [&](std::size_t i) {
        auto c = g.multi_index(i);
        for (int j = g.dim - 1; j >= 0; --j) c[j] = table[j][g.flat_index(c)];
        out[i] = static_cast<std::int32_t>(g.flat_index(c));
    });
    return res;
}

CTransformResult c_transform_brute(const PotentialField& f) {
    const GridSpec& g = f.grid;
    const std::size_t n = g.size();
    if (n > 100000) fail(ErrorKind::TooLarge, "c_transform_brute: grid too large for the oracle");
    require_finite(f.values, "c_transform_brute");

    std::array<std::vector<double>, 3> pos;
    for (int j = 0; j < g.dim; ++j) {
        pos[j].resize(g.shape[j]);
        for (int p = 0; p < g.shape[j]; ++p) pos[j][p] = g.center(j, p);
    }

    std::vector<double> neg(n);
    for (std::size_t i = 0; i < n; ++i) neg[i] = -f.values[i];

    CTransformResult res;
    res.fc = PotentialField(g);
    res.argmin.resize(n);

    parallel_for(0, n, [&](std::size_t xi) {
        const auto x = g.multi_index(xi);
        double best = kInf;
        std::size_t besty = 0;
        // Candidates enumerated with axis 1 fastest: first strict minimum
        // matches the fast transform's composed tie rule.
        std::array<int, 3> y{0, 0, 0};
        for (std::size_t q = 0; q < n; ++q) {
            std::size_t r = q;
            for (int j = 0; j < g.dim; ++j) {
                y[j] = static_cast<int>(r % g.shape[j]);
                r /= g.shape[j];
            }
            const std::size_t yi = g.flat_index(y);
            double acc = neg[yi];
            for (int j = 0; j < g.dim; ++j) {
                const double dx = pos[j][x[j]] - pos[j][y[j]];
                const double t = 0.5 * dx * dx;
                acc = t + acc;
            }
            if (acc < best) {
                best = acc;
                besty = yi;
            }
        }
        res.fc.values[xi] = best;
        res.argmin[xi] = static_cast<std::int32_t>(besty);
    });
    return res;
}

PotentialField double_c_transform(const PotentialField& f) {
    return c_transform_fast(c_transform_fast(f).fc).fc;
}

} // namespace sga
