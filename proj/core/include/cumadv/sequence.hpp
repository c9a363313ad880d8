#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace cumadv {

enum class OutcomeKind { Real, Integer, Vector };

const char* to_string(OutcomeKind kind);

/// One realization Y_1..Y_n of a discrete-time process. Every entry has the
/// same outcome kind; vector outcomes all share one width.
class SequenceSample {
 public:
  using Reals = std::vector<double>;
  using Integers = std::vector<std::int64_t>;
  using Vectors = std::vector<std::vector<int>>;

  SequenceSample(std::string model_id, Reals values);
  SequenceSample(std::string model_id, Integers values);
  SequenceSample(std::string model_id, Vectors values);

  [[nodiscard]] const std::string& model_id() const noexcept { return model_id_; }
  [[nodiscard]] std::size_t size() const noexcept;
  [[nodiscard]] bool empty() const noexcept { return size() == 0; }
  [[nodiscard]] OutcomeKind kind() const noexcept;

  // Throw std::logic_error on a kind mismatch.
  [[nodiscard]] const Reals& reals() const;
  [[nodiscard]] const Integers& integers() const;
  [[nodiscard]] const Vectors& vectors() const;

  /// Width of one flattened outcome (1 for scalars).
  [[nodiscard]] std::size_t width() const noexcept;
  /// Appends the outcomes, flattened, to out.
  void flatten_into(std::vector<double>& out) const;

 private:
  std::string model_id_;
  std::variant<Reals, Integers, Vectors> values_;
};

}  // namespace cumadv
