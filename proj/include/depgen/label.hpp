#pragma once

#include <compare>
#include <string>

namespace depgen {

// A delexicalized content unit: one (record type, field) pair of a meaning
// representation. `occurrence` disambiguates repeated record types within a
// single MR; it is internal and never part of the rendered form.
struct MeaningLabel {
  std::string record_type;
  std::string field;
  int occurrence = 0;

  // Rendered form, e.g. "[pass;@arg1]".
  std::string render() const {
    return "[" + record_type + ";@" + field + "]";
  }

  // Identity without occurrence; this is the key used by all trained models.
  bool same_slot_type(const MeaningLabel& other) const {
    return record_type == other.record_type && field == other.field;
  }

  auto operator<=>(const MeaningLabel&) const = default;
};

}  // namespace depgen
