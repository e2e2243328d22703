#ifndef BIKECAST_MODEL_HPP
#define BIKECAST_MODEL_HPP

#include <iosfwd>
#include <variant>

#include "bikecast/forest.hpp"
#include "bikecast/lsboost.hpp"
#include "bikecast/plsr.hpp"
#include "bikecast/tree.hpp"

namespace bikecast {

using Model = std::variant<RegressionTree, ForestModel, BoostModel, PLSRModel>;

// Predictions in log1p space, one column per response (1 except PLSR).
Matrix predict(const Model& model, const Matrix& X);

const char* model_kind(const Model& model);

// Structured text (JSON) with exact round-trip doubles; reloading
// reproduces the model bit for bit.
void save_model(const Model& model, std::ostream& out);
Model load_model(std::istream& in);

} // namespace bikecast

#endif
