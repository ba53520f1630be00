#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "potalign/pot.hpp"
#include "potalign/shot.hpp"

namespace potalign::cluster {

struct Codebook {
    int V = 0;
    std::vector<std::vector<double>> centers;
    double energy = 0.0;  // objective of the selected run
};

struct KmeansParams {
    int V = 800;
    int runs = 8;
    std::uint64_t seed = 0;
    int max_iters = 100;
    double tol = 1e-6;  // relative energy change
    int jobs = 1;
};

// Standard Lloyd k-means with Euclidean distance; each run seeds centers
// from V distinct sample points and the lowest-energy run wins. Throws
// std::invalid_argument when the sample is smaller than V (use a smaller V).
Codebook build_codebook(const std::vector<std::vector<double>>& samples,
                        const KmeansParams& params);

// Nearest center by Euclidean distance; ties resolve to the lowest index.
int quantize(const Codebook& codebook, std::span<const double> descriptor);

// L1-normalized codeword histogram.
struct Bow {
    std::vector<double> w;
};

double histogram_intersection(const Bow& a, const Bow& b);

// d(u,v) = -exp(-(1 - HI(u,v))): -1 for identical histograms, -e^{-1} for
// disjoint supports, strictly decreasing in HI.
double hi_distance(const Bow& a, const Bow& b);

// Multi-channel combination: -exp(-sum_i (1-HI_i)/A_i) with A_i the average
// (1-HI) of channel i over the pairwise set. Channels with A_i = 0 are
// skipped.
double multichannel_distance(std::span<const Bow> u, std::span<const Bow> v,
                             std::span<const double> A);

// Average (1-HI) per channel over all item pairs, for the A_i of the
// multi-channel distance.
std::vector<double> channel_averages(const std::vector<std::vector<Bow>>& items_by_channel);

// Histogram over the interval of the PoTs whose frame span intersects it.
// Empty when the interval contains no PoTs; such intervals are excluded from
// clustering and reported by the pipeline.
std::optional<Bow> interval_bow(const Interval& interval, std::span<const pot::Pot> pots,
                                std::span<const int> codewords, int V);

struct ClusterResult {
    std::vector<int> assignment;  // item -> cluster id (0..k-1, ordered by first member)
    struct Merge {
        int a = 0;  // cluster representatives: smallest member index
        int b = 0;
        double height = 0.0;
    };
    std::vector<Merge> merges;  // full dendrogram, n-1 merges
    int k = 1;
};

// Agglomerative clustering with complete linkage (cluster distance = max
// pairwise item distance). Ties break on the lowest representative pair.
// The assignment is the dendrogram cut at k clusters.
ClusterResult complete_linkage(int n, const std::function<double(int, int)>& distance, int k);

}  // namespace potalign::cluster
