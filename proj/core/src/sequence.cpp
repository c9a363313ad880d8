#include "cumadv/sequence.hpp"

#include <stdexcept>
#include <utility>

namespace cumadv {

const char* to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Real:
      return "real";
    case OutcomeKind::Integer:
      return "integer";
    case OutcomeKind::Vector:
      return "vector";
  }
  return "unknown";
}

SequenceSample::SequenceSample(std::string model_id, Reals values)
    : model_id_(std::move(model_id)), values_(std::move(values)) {}

SequenceSample::SequenceSample(std::string model_id, Integers values)
    : model_id_(std::move(model_id)), values_(std::move(values)) {}

SequenceSample::SequenceSample(std::string model_id, Vectors values)
    : model_id_(std::move(model_id)), values_(std::move(values)) {
  const auto& v = std::get<Vectors>(values_);
  for (const auto& row : v) {
    if (row.size() != v.front().size()) throw std::invalid_argument("SequenceSample: vector outcomes differ in width");
  }
}

std::size_t SequenceSample::size() const noexcept {
  return std::visit([](const auto& v) { return v.size(); }, values_);
}

OutcomeKind SequenceSample::kind() const noexcept {
  switch (values_.index()) {
    case 0:
      return OutcomeKind::Real;
    case 1:
      return OutcomeKind::Integer;
    default:
      return OutcomeKind::Vector;
  }
}

const SequenceSample::Reals& SequenceSample::reals() const {
  if (const auto* p = std::get_if<Reals>(&values_)) return *p;
  throw std::logic_error("SequenceSample '" + model_id_ + "' is not real-valued");
}

const SequenceSample::Integers& SequenceSample::integers() const {
  if (const auto* p = std::get_if<Integers>(&values_)) return *p;
  throw std::logic_error("SequenceSample '" + model_id_ + "' is not integer-valued");
}

const SequenceSample::Vectors& SequenceSample::vectors() const {
  if (const auto* p = std::get_if<Vectors>(&values_)) return *p;
  throw std::logic_error("SequenceSample '" + model_id_ + "' is not vector-valued");
}

std::size_t SequenceSample::width() const noexcept {
  if (const auto* p = std::get_if<Vectors>(&values_)) return p->empty() ? 0 : p->front().size();
  return 1;
}

void SequenceSample::flatten_into(std::vector<double>& out) const {
  std::visit(
      [&out](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Vectors>) {
          for (const auto& row : v)
            for (int x : row) out.push_back(static_cast<double>(x));
        } else {
          for (auto x : v) out.push_back(static_cast<double>(x));
        }
      },
      values_);
}

}  // namespace cumadv
