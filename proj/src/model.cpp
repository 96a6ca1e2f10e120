#include "mdlad/model.hpp"

namespace mdlad {

std::vector<double> ComponentModel::item_costs(const CategoricalDataset& data) const {
    std::vector<double> out(data.n_rows());
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        out[i] = item_cost(data.row(i));
    }
    return out;
}

}  // namespace mdlad
