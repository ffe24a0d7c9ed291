#include "momentmix/combinatorics.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "momentmix/errors.hpp"

namespace momentmix {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    // result * (n - i) is divisible by (i + 1) at every step.
    result = result * (n - i) / (i + 1);
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      throw Error(ErrorCode::Overflow,
                  "binomial(" + std::to_string(n) + "," + std::to_string(k) + ") exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(result);
}

bool strictly_increasing(std::span<const int> labels) noexcept {
  return std::adjacent_find(labels.begin(), labels.end(),
                            [](int a, int b) { return a >= b; }) == labels.end();
}

std::vector<IndexSubset> subsets_lex(int lo, int hi, int size) {
  std::vector<IndexSubset> out;
  if (size < 0) return out;
  if (size == 0) {
    out.emplace_back();
    return out;
  }
  const int span = hi - lo + 1;
  if (span < size) return out;

  IndexSubset current(size);
  for (int i = 0; i < size; ++i) current[i] = lo + i;
  while (true) {
    out.push_back(current);
    int pos = size - 1;
    while (pos >= 0 && current[pos] == hi - (size - 1 - pos)) --pos;
    if (pos < 0) break;
    ++current[pos];
    for (int i = pos + 1; i < size; ++i) current[i] = current[i - 1] + 1;
  }
  return out;
}

std::vector<IndexSubset> basis_b0(int k, int p, int r) {
  if (p < 1 || p > k) {
    throw Error(ErrorCode::InvalidArgument, "basis_b0 requires 1 <= p <= k");
  }
  if (r < 0 || binomial(k, p) < static_cast<std::uint64_t>(r)) {
    throw Error(ErrorCode::RankTooLarge, "C(" + std::to_string(k) + "," + std::to_string(p) +
                                             ") < r = " + std::to_string(r));
  }
  auto all = subsets_lex(1, k, p);
  all.resize(static_cast<std::size_t>(r));
  return all;
}

std::vector<IndexSubset> basis_b1(int k, int p, int n) {
  std::vector<IndexSubset> out;
  for (const auto& head : subsets_lex(1, k, p)) {
    for (int tail = k + 1; tail <= n; ++tail) {
      IndexSubset alpha = head;
      alpha.push_back(tail);
      out.push_back(std::move(alpha));
    }
  }
  return out;
}

std::vector<IndexSubset> support_o_alpha(const IndexSubset& alpha, int k, int n, int m, int p) {
  if (static_cast<int>(alpha.size()) != p + 1 || alpha.back() <= k || alpha.back() > n) {
    throw Error(ErrorCode::InvalidArgument, "support_o_alpha: alpha is not in B1");
  }
  const int tail = alpha.back();
  std::vector<IndexSubset> out;
  for (auto& s : subsets_lex(k + 1, n, m - p - 1)) {
    if (std::find(s.begin(), s.end(), tail) == s.end()) out.push_back(std::move(s));
  }
  return out;
}

IndexSubset merge_disjoint(std::span<const int> a, std::span<const int> b, bool& ok) {
  IndexSubset out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  ok = strictly_increasing(out);
  return out;
}

TensorKey::TensorKey(std::vector<int> slots) : slots_(std::move(slots)) {
  std::sort(slots_.begin(), slots_.end());
}

bool TensorKey::distinct() const noexcept { return strictly_increasing(slots_); }

bool TensorKey::single_repeated_pair() const noexcept {
  int pairs = 0;
  for (std::size_t i = 0; i + 1 < slots_.size(); ++i) {
    if (slots_[i] == slots_[i + 1]) {
      if (i + 2 < slots_.size() && slots_[i + 2] == slots_[i]) return false;
      ++pairs;
    }
  }
  return pairs == 1;
}

}  // namespace momentmix
