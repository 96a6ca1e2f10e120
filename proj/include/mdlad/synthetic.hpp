#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdlad/dataset.hpp"

namespace mdlad {

/// Recipe for a heterogeneous binary dataset: several clusters drawn from
/// per-cluster independent Bernoulli attribute vectors, plus a handful of
/// seeded anomaly records drawn from their own vector (by default the
/// arithmetic mean of the cluster vectors, which makes the anomalies look
/// like the dataset-wide average while belonging to no cluster).
struct SyntheticSpec {
    std::vector<std::size_t> cluster_sizes;
    std::size_t attribute_count{0};
    /// One probability vector per cluster, each of length attribute_count,
    /// entries strictly inside (0, 1).
    std::vector<std::vector<double>> cluster_probs;
    std::size_t anomaly_count{0};
    /// Defaults to the mean of cluster_probs when unset.
    std::optional<std::vector<double>> anomaly_probs;
    std::uint64_t seed{0};

    /// Three well-separated clusters of 334/333/333 records over 12 binary
    /// attributes (each cluster "active" on its own block of four at p=0.9,
    /// p=0.1 elsewhere) and three seeded mean-distribution anomalies.
    static SyntheticSpec default_three_cluster(std::uint64_t seed);

    /// Single homogeneous source, no anomalies; for K-selection sanity runs.
    static SyntheticSpec single_source(std::size_t n, std::uint64_t seed);

    static SyntheticSpec from_json_file(const std::string& path);

    void validate() const;
    std::vector<double> effective_anomaly_probs() const;
};

/// Draws the dataset described by the spec. Cluster records come first, in
/// cluster order, then the seeded anomalies; labels mark only the seeded
/// records. Byte-identical output for equal specs.
CategoricalDataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace mdlad
