#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shiftig/model.hpp"
#include "shiftig/signal.hpp"

namespace shiftig {

// Randomly initialised models used by the verification command, the tests
// and `synth --emit-model`. Same arguments give bit-identical weights.
DifferentiableModel make_linear_model(Shape input, std::uint64_t seed);
DifferentiableModel make_tanh_mlp(Shape input, std::uint64_t seed,
                                  const std::vector<std::size_t>& hidden = {16, 8});
DifferentiableModel make_relu_mlp(Shape input, std::uint64_t seed,
                                  const std::vector<std::size_t>& hidden = {16});
// Several logits with class 1 selected.
DifferentiableModel make_logits_mlp(Shape input, std::uint64_t seed, std::size_t classes = 3);

// Responds to how far an input has moved from `rest` towards `exertion`:
// the first hidden unit projects onto the normalized difference template,
// two weak random units add background sensitivity everywhere.
DifferentiableModel make_exertion_model(const LeadTimeMatrix& rest,
                                        const LeadTimeMatrix& exertion, std::uint64_t seed);

struct NamedModel {
  std::string name;
  DifferentiableModel model;
};

// The fixture set checked by `verify` when no model file is given.
std::vector<NamedModel> bundled_models(Shape input, std::uint64_t seed);

}  // namespace shiftig
