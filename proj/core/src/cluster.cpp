#include "potalign/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "potalign/parallel.hpp"
#include "potalign/random.hpp"

namespace potalign::cluster {

namespace {

double squared_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

struct RunResult {
    std::vector<std::vector<double>> centers;
    double energy = std::numeric_limits<double>::infinity();
};

RunResult kmeans_run(const std::vector<std::vector<double>>& samples, int V, Rng rng,
                     int max_iters, double tol, int jobs) {
    const std::size_t n = samples.size();
    const std::size_t dim = samples[0].size();

    // seed from V distinct sample points
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (int i = 0; i < V; ++i) {
        const std::size_t j = i + rng.next_below(n - i);
        std::swap(order[i], order[j]);
    }
    std::vector<std::vector<double>> centers(static_cast<size_t>(V));
    for (int c = 0; c < V; ++c) centers[c] = samples[order[c]];

    std::vector<int> assign(n, 0);
    std::vector<double> point_dist(n, 0.0);
    double prev_energy = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < max_iters; ++iter) {
        parallel_for(n, jobs, [&](std::size_t i) {
            double best = std::numeric_limits<double>::infinity();
            int best_c = 0;
            for (int c = 0; c < V; ++c) {
                const double d = squared_dist(samples[i], centers[c]);
                if (d < best) {
                    best = d;
                    best_c = c;
                }
            }
            assign[i] = best_c;
            point_dist[i] = best;
        });
        double energy = 0.0;
        for (double d : point_dist) energy += d;

        std::vector<std::vector<double>> sums(static_cast<size_t>(V),
                                              std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(static_cast<size_t>(V), 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[assign[i]];
            for (std::size_t d = 0; d < dim; ++d) sums[assign[i]][d] += samples[i][d];
        }
        for (int c = 0; c < V; ++c) {
            if (counts[c] == 0) {
                // reseed an empty cluster from the farthest point
                std::size_t far = 0;
                for (std::size_t i = 1; i < n; ++i)
                    if (point_dist[i] > point_dist[far]) far = i;
                centers[c] = samples[far];
                point_dist[far] = 0.0;
                continue;
            }
            for (std::size_t d = 0; d < dim; ++d) centers[c][d] = sums[c][d] / counts[c];
        }

        if (prev_energy < std::numeric_limits<double>::infinity()) {
            const double rel = (prev_energy - energy) / std::max(prev_energy, 1e-300);
            if (rel >= 0.0 && rel < tol) {
                prev_energy = energy;
                break;
            }
        }
        prev_energy = energy;
    }

    // final assignment pass so the reported energy matches the centers
    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int c = 0; c < V; ++c) best = std::min(best, squared_dist(samples[i], centers[c]));
        energy += best;
    }
    return {std::move(centers), energy};
}

}  // namespace

Codebook build_codebook(const std::vector<std::vector<double>>& samples,
                        const KmeansParams& params) {
    if (params.V < 2) throw std::invalid_argument("codebook size must be at least 2");
    if (static_cast<int>(samples.size()) < params.V)
        throw std::invalid_argument(
            "sample of " + std::to_string(samples.size()) +
            " descriptors is smaller than V=" + std::to_string(params.V) +
            "; use a smaller codebook");

    Rng root(params.seed ^ 0xc0debookULL);
    RunResult best;
    int best_run = -1;
    for (int run = 0; run < params.runs; ++run) {
        RunResult r = kmeans_run(samples, params.V, root.fork(static_cast<std::uint64_t>(run)),
                                 params.max_iters, params.tol, params.jobs);
        if (best_run < 0 || r.energy < best.energy) {
            best = std::move(r);
            best_run = run;
        }
    }
    return {params.V, std::move(best.centers), best.energy};
}

int quantize(const Codebook& codebook, std::span<const double> descriptor) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < codebook.V; ++c) {
        const double d = squared_dist(descriptor, codebook.centers[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

double histogram_intersection(const Bow& a, const Bow& b) {
    double s = 0.0;
    const std::size_t n = std::min(a.w.size(), b.w.size());
    for (std::size_t i = 0; i < n; ++i) s += std::min(a.w[i], b.w[i]);
    return s;
}

double hi_distance(const Bow& a, const Bow& b) {
    return -std::exp(-(1.0 - histogram_intersection(a, b)));
}

double multichannel_distance(std::span<const Bow> u, std::span<const Bow> v,
                             std::span<const double> A) {
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (A[i] <= 0.0) continue;  // degenerate channel, skipped
        sum += (1.0 - histogram_intersection(u[i], v[i])) / A[i];
    }
    return -std::exp(-sum);
}

std::vector<double> channel_averages(const std::vector<std::vector<Bow>>& items_by_channel) {
    std::vector<double> A;
    for (const auto& items : items_by_channel) {
        double sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < items.size(); ++i)
            for (std::size_t j = i + 1; j < items.size(); ++j) {
                sum += 1.0 - histogram_intersection(items[i], items[j]);
                ++pairs;
            }
        A.push_back(pairs == 0 ? 0.0 : sum / static_cast<double>(pairs));
    }
    return A;
}

std::optional<Bow> interval_bow(const Interval& interval, std::span<const pot::Pot> pots,
                                std::span<const int> codewords, int V) {
    Bow bow;
    bow.w.assign(static_cast<size_t>(V), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < pots.size(); ++i) {
        const pot::Pot& p = pots[i];
        if (p.end_frame() < interval.start_frame || p.start_frame > interval.end_frame) continue;
        bow.w[codewords[i]] += 1.0;
        total += 1.0;
    }
    if (total <= 0.0) return std::nullopt;
    for (double& w : bow.w) w /= total;
    return bow;
}

ClusterResult complete_linkage(int n, const std::function<double(int, int)>& distance, int k) {
    ClusterResult result;
    result.k = k;
    result.assignment.assign(static_cast<size_t>(n), 0);
    if (n <= 0) return result;

    struct Cluster {
        int rep;  // smallest member index
        std::vector<int> members;
        bool alive = true;
    };
    std::vector<Cluster> clusters(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) clusters[i] = {i, {i}, true};

    // current complete-linkage distances between alive clusters
    std::vector<std::vector<double>> D(static_cast<size_t>(n),
                                       std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) D[i][j] = D[j][i] = distance(i, j);

    auto snapshot_assignment = [&](std::vector<int>& out) {
        std::vector<int> reps;
        for (const Cluster& c : clusters)
            if (c.alive) reps.push_back(c.rep);
        std::sort(reps.begin(), reps.end());
        for (std::size_t label = 0; label < reps.size(); ++label) {
            for (const Cluster& c : clusters)
                if (c.alive && c.rep == reps[label])
                    for (int m : c.members) out[m] = static_cast<int>(label);
        }
    };

    int alive = n;
    if (alive == k) snapshot_assignment(result.assignment);
    while (alive > 1) {
        int best_i = -1, best_j = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (!clusters[i].alive) continue;
            for (int j = i + 1; j < n; ++j) {
                if (!clusters[j].alive) continue;
                const double d = D[i][j];
                const int lo = std::min(clusters[i].rep, clusters[j].rep);
                const int hi = std::max(clusters[i].rep, clusters[j].rep);
                if (best_i < 0 || d < best_d) {
                    best_d = d;
                    best_i = i;
                    best_j = j;
                } else if (d == best_d) {
                    const int blo = std::min(clusters[best_i].rep, clusters[best_j].rep);
                    const int bhi = std::max(clusters[best_i].rep, clusters[best_j].rep);
                    if (lo < blo || (lo == blo && hi < bhi)) {
                        best_i = i;
                        best_j = j;
                    }
                }
            }
        }

        result.merges.push_back({std::min(clusters[best_i].rep, clusters[best_j].rep),
                                 std::max(clusters[best_i].rep, clusters[best_j].rep), best_d});
        // merge j into i
        Cluster& a = clusters[best_i];
        Cluster& b = clusters[best_j];
        a.rep = std::min(a.rep, b.rep);
        a.members.insert(a.members.end(), b.members.begin(), b.members.end());
        b.alive = false;
        for (int c = 0; c < n; ++c) {
            if (!clusters[c].alive || c == best_i) continue;
            D[best_i][c] = D[c][best_i] = std::max(D[best_i][c], D[best_j][c]);
        }
        --alive;
        if (alive == k) snapshot_assignment(result.assignment);
    }
    if (k >= n)
        for (int i = 0; i < n; ++i) result.assignment[i] = i;
    return result;
}

}  // namespace potalign::cluster
