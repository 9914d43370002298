#include "ppboot/moment_oracle.hpp"

#include <vector>

#include <fmt/format.h>

#include "ppboot/error.hpp"

namespace ppboot {

Rational multinomial_moment_oracle(std::size_t n, std::span<const unsigned> exponents) {
  if (n == 0 || n > max_oracle_n) {
    throw InvalidParameter(fmt::format("moment enumeration supports 1 <= n <= {}, got {}", max_oracle_n, n));
  }
  std::vector<std::size_t> categories;
  std::vector<unsigned> powers;
  for (std::size_t c = 0; c < exponents.size(); ++c) {
    if (exponents[c] == 0) continue;
    categories.push_back(categories.size());
    powers.push_back(exponents[c]);
  }
  if (categories.size() > n) {
    throw UndefinedMoment(fmt::format("moment involves {} distinct points but n = {}", categories.size(), n));
  }

  // Odometer over the category chosen by each of the n draws.
  std::vector<std::size_t> choice(n, 0);
  std::vector<std::int64_t> counts(n, 0);
  counts[0] = static_cast<std::int64_t>(n);
  std::int64_t total = 0;
  std::int64_t outcomes = 0;
  for (;;) {
    std::int64_t term = 1;
    for (std::size_t k = 0; k < categories.size(); ++k) {
      for (unsigned p = 0; p < powers[k]; ++p) term *= counts[categories[k]];
    }
    total += term;
    ++outcomes;

    std::size_t digit = 0;
    while (digit < n) {
      --counts[choice[digit]];
      if (++choice[digit] < n) {
        ++counts[choice[digit]];
        break;
      }
      choice[digit] = 0;
      ++counts[0];
      ++digit;
    }
    if (digit == n) break;
  }
  return Rational(total, outcomes);
}

ExactAlphas enumerated_alphas(std::size_t n) {
  if (n < 4) throw UndefinedMoment(fmt::format("alpha enumeration needs n >= 4, got {}", n));
  const unsigned pair[] = {1, 1};
  const unsigned quad[] = {1, 1, 1, 1};
  const unsigned triple_sq[] = {2, 1, 1};
  const unsigned pair_sq[] = {2, 2};
  const Rational e2 = multinomial_moment_oracle(n, pair);
  const Rational base = e2 * e2;
  return ExactAlphas{
      multinomial_moment_oracle(n, pair_sq) - base,
      multinomial_moment_oracle(n, triple_sq) - base,
      multinomial_moment_oracle(n, quad) - base,
  };
}

}  // namespace ppboot
