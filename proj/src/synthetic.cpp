#include "mdlad/synthetic.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mdlad/rng.hpp"

namespace mdlad {

SyntheticSpec SyntheticSpec::default_three_cluster(std::uint64_t seed) {
    SyntheticSpec spec;
    spec.cluster_sizes = {334, 333, 333};
    spec.attribute_count = 12;
    spec.cluster_probs.assign(3, std::vector<double>(12, 0.1));
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t a = 4 * c; a < 4 * c + 4; ++a) {
            spec.cluster_probs[c][a] = 0.9;
        }
    }
    spec.anomaly_count = 3;
    spec.seed = seed;
    return spec;
}

SyntheticSpec SyntheticSpec::single_source(std::size_t n, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.cluster_sizes = {n};
    spec.attribute_count = 12;
    spec.cluster_probs.assign(1, std::vector<double>(12));
    for (std::size_t a = 0; a < 12; ++a) {
        spec.cluster_probs[0][a] = a % 2 == 0 ? 0.25 : 0.65;
    }
    spec.anomaly_count = 0;
    spec.seed = seed;
    return spec;
}

SyntheticSpec SyntheticSpec::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    nlohmann::json j;
    in >> j;
    SyntheticSpec spec;
    spec.cluster_sizes = j.at("cluster_sizes").get<std::vector<std::size_t>>();
    spec.cluster_probs =
        j.at("cluster_probs").get<std::vector<std::vector<double>>>();
    spec.attribute_count =
        j.contains("attribute_count")
            ? j.at("attribute_count").get<std::size_t>()
            : (spec.cluster_probs.empty() ? 0 : spec.cluster_probs[0].size());
    spec.anomaly_count = j.value("anomaly_count", std::size_t{0});
    if (j.contains("anomaly_probs")) {
        spec.anomaly_probs = j.at("anomaly_probs").get<std::vector<double>>();
    }
    spec.seed = j.value("seed", std::uint64_t{0});
    return spec;
}

void SyntheticSpec::validate() const {
    if (cluster_sizes.empty() || cluster_probs.size() != cluster_sizes.size()) {
        throw std::invalid_argument(
            "spec needs one probability vector per cluster");
    }
    if (attribute_count == 0) {
        throw std::invalid_argument("spec needs at least one attribute");
    }
    auto check_probs = [this](const std::vector<double>& p, const char* what) {
        if (p.size() != attribute_count) {
            throw std::invalid_argument(std::string(what) +
                                        " has wrong attribute count");
        }
        for (double v : p) {
            if (!(v > 0.0 && v < 1.0)) {
                throw std::invalid_argument(std::string(what) +
                                            " probabilities must lie in (0,1)");
            }
        }
    };
    for (const auto& p : cluster_probs) {
        check_probs(p, "cluster vector");
    }
    if (anomaly_probs) {
        check_probs(*anomaly_probs, "anomaly vector");
    }
    std::size_t total = 0;
    for (std::size_t s : cluster_sizes) {
        if (s == 0) {
            throw std::invalid_argument("cluster sizes must be positive");
        }
        total += s;
    }
    if (anomaly_count >= total) {
        throw std::invalid_argument("anomaly count must be far below data size");
    }
}

std::vector<double> SyntheticSpec::effective_anomaly_probs() const {
    if (anomaly_probs) {
        return *anomaly_probs;
    }
    std::vector<double> mean(attribute_count, 0.0);
    for (const auto& p : cluster_probs) {
        for (std::size_t a = 0; a < attribute_count; ++a) {
            mean[a] += p[a];
        }
    }
    for (double& v : mean) {
        v /= static_cast<double>(cluster_probs.size());
    }
    return mean;
}

CategoricalDataset generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    const std::size_t m = spec.attribute_count;
    std::size_t n = spec.anomaly_count;
    for (std::size_t s : spec.cluster_sizes) {
        n += s;
    }

    SplitRng rng(spec.seed);
    std::vector<std::int32_t> cells;
    cells.reserve(n * m);
    auto draw_record = [&](const std::vector<double>& probs) {
        for (std::size_t a = 0; a < m; ++a) {
            cells.push_back(rng.next_bernoulli(probs[a]) ? 1 : 0);
        }
    };
    for (std::size_t c = 0; c < spec.cluster_sizes.size(); ++c) {
        for (std::size_t i = 0; i < spec.cluster_sizes[c]; ++i) {
            draw_record(spec.cluster_probs[c]);
        }
    }
    const std::vector<double> anomaly_probs = spec.effective_anomaly_probs();
    for (std::size_t i = 0; i < spec.anomaly_count; ++i) {
        draw_record(anomaly_probs);
    }

    std::vector<std::string> names;
    std::vector<std::vector<std::string>> domains;
    names.reserve(m);
    for (std::size_t a = 0; a < m; ++a) {
        names.push_back("attr_" + std::to_string(a));
        domains.push_back({"0", "1"});
    }
    auto d = CategoricalDataset::from_cells(std::move(names), std::move(domains),
                                            std::move(cells));
    std::vector<std::uint8_t> labels(n, 0);
    for (std::size_t i = n - spec.anomaly_count; i < n; ++i) {
        labels[i] = 1;
    }
    d.set_labels(std::move(labels));
    return d;
}

}  // namespace mdlad
