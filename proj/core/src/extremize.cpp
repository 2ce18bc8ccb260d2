#include "metaestim/extremize.hpp"

#include <stdexcept>

namespace metaestim {

const std::vector<std::string>& method_keys() {
  static const std::vector<std::string> keys{"pso", "saa", "acor", "ees1", "ees2"};
  return keys;
}

Method parse_method(std::string_view key) {
  if (key == "pso") return Method::pso;
  if (key == "saa") return Method::saa;
  if (key == "acor") return Method::acor;
  if (key == "ees1") return Method::ees1;
  if (key == "ees2") return Method::ees2;
  throw std::invalid_argument("unknown method '" + std::string(key) + "' (valid: pso, saa, acor, ees1, ees2)");
}

std::string to_string(Method m) { return method_keys().at(static_cast<std::size_t>(m)); }

AlgorithmOptions default_options(Method m) {
  switch (m) {
    case Method::pso: return OptionsPSO{};
    case Method::saa: return OptionsSAA{};
    case Method::acor: return OptionsACOR{};
    case Method::ees1: return OptionsEES1{};
    case Method::ees2: return OptionsEES2{};
  }
  throw std::invalid_argument("unknown method");
}

bool options_match(Method m, const AlgorithmOptions& options) {
  return options.index() == static_cast<std::size_t>(m);
}

Estimates extremize(Method method, Objective& obj, const std::optional<AlgorithmOptions>& options,
                    std::uint64_t seed) {
  const AlgorithmOptions opts = options ? *options : default_options(method);
  if (!options_match(method, opts))
    throw std::invalid_argument("options do not belong to method '" + to_string(method) + "'");
  Rng rng(seed);
  switch (method) {
    case Method::pso: return pso(obj, std::get<OptionsPSO>(opts), rng);
    case Method::saa: return saa(obj, std::get<OptionsSAA>(opts), rng);
    case Method::acor: return acor(obj, std::get<OptionsACOR>(opts), rng);
    case Method::ees1: return ees1(obj, std::get<OptionsEES1>(opts), rng);
    case Method::ees2: return ees2(obj, std::get<OptionsEES2>(opts), rng);
  }
  throw std::invalid_argument("unknown method");
}

Estimates extremize(std::string_view method, Objective& obj, const std::optional<AlgorithmOptions>& options,
                    std::uint64_t seed) {
  return extremize(parse_method(method), obj, options, seed);
}

}  // namespace metaestim
