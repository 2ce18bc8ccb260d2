#ifndef METAESTIM_EXTREMIZE_HPP
#define METAESTIM_EXTREMIZE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "metaestim/acor.hpp"
#include "metaestim/core.hpp"
#include "metaestim/ees1.hpp"
#include "metaestim/ees2.hpp"
#include "metaestim/pso.hpp"
#include "metaestim/random.hpp"
#include "metaestim/saa.hpp"

namespace metaestim {

enum class Method { pso, saa, acor, ees1, ees2 };

using AlgorithmOptions = std::variant<OptionsPSO, OptionsSAA, OptionsACOR, OptionsEES1, OptionsEES2>;

/// "pso", "saa", "acor", "ees1" or "ees2"; anything else throws
/// std::invalid_argument naming the accepted keys.
Method parse_method(std::string_view key);
std::string to_string(Method m);
const std::vector<std::string>& method_keys();

AlgorithmOptions default_options(Method m);
bool options_match(Method m, const AlgorithmOptions& options);

/// Runs the named method on obj with a fresh stream seeded from seed. Default
/// options are used when none are given; options of another method's type
/// are rejected.
Estimates extremize(Method method, Objective& obj, const std::optional<AlgorithmOptions>& options = std::nullopt,
                    std::uint64_t seed = kDefaultSeed);
Estimates extremize(std::string_view method, Objective& obj,
                    const std::optional<AlgorithmOptions>& options = std::nullopt, std::uint64_t seed = kDefaultSeed);

}  // namespace metaestim

#endif  // METAESTIM_EXTREMIZE_HPP
