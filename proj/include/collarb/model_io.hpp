#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "collarb/model.hpp"

namespace collarb {

using Json = nlohmann::ordered_json;

/// A model file: the market plus an optional exchange set.
struct ModelDocument {
  std::string description;
  MarketModel model;
  std::optional<ExchangeSpace> exchange;
};

/// Throws InputError on malformed documents. Structural invariants are left to
/// validate_model so that broken models can still be loaded and reported on.
ModelDocument parse_model(const Json& doc);
ModelDocument parse_model_text(const std::string& text);
ModelDocument load_model(const std::string& path);

Json to_json(const ModelDocument& doc);
/// Stable rendering: two-space indent, fixed key order, trailing newline.
std::string serialize_model(const ModelDocument& doc);

Json rational_json(const Rational& r);
Json rational_array(std::span<const Rational> v);

}  // namespace collarb
