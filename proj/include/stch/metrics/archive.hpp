#ifndef STCH_METRICS_ARCHIVE_HPP
#define STCH_METRICS_ARCHIVE_HPP

#include <algorithm>
#include <numeric>
#include <vector>

#include "stch/core.hpp"
#include "stch/metrics/dominance.hpp"
#include "stch/metrics/hypervolume.hpp"
#include "stch/problems/reference_front.hpp"

namespace stch {

/// One solution: decision vector and its objective values.
struct ArchiveEntry {
  Vector x;
  Vector f;
};

/**
 * @brief Non-dominated set of (x, f) pairs.
 *
 * Every insert re-filters, so the entries are always pairwise non-dominated
 * and ordered lexicographically by f. Exact duplicates in f keep the first
 * inserted entry.
 */
class ParetoArchive {
 public:
  ParetoArchive() = default;
  explicit ParetoArchive(Vector reference_point) : reference_point_(std::move(reference_point)) {}

  void insert(Vector x, Vector f) {
    detail::require(f.allFinite(), "archive entries must have finite objectives");
    if (!entries_.empty()) detail::require_same_size(f.size(), entries_.front().f.size(), "archive objective");
    entries_.push_back({std::move(x), std::move(f)});
    filter();
  }

  /// Adds many entries and filters once.
  void insert_all(std::vector<ArchiveEntry> batch) {
    for (auto& e : batch) {
      detail::require(e.f.allFinite(), "archive entries must have finite objectives");
      entries_.push_back(std::move(e));
    }
    filter();
  }

  [[nodiscard]] const std::vector<ArchiveEntry>& entries() const { return entries_; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] const Vector& reference_point() const { return reference_point_; }
  void set_reference_point(Vector ref) { reference_point_ = std::move(ref); }

  [[nodiscard]] std::vector<Vector> objectives() const {
    std::vector<Vector> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.f);
    return out;
  }

 private:
  void filter() {
    const auto keep = nondominated_indices(objectives());
    std::vector<ArchiveEntry> kept;
    kept.reserve(keep.size());
    for (auto i : keep) kept.push_back(entries_[i]);
    entries_ = std::move(kept);
  }

  std::vector<ArchiveEntry> entries_;
  Vector reference_point_;
};

struct DeltaHv {
  double delta = 0.0;
  /// Archive points that do not strictly dominate the reference point.
  std::size_t dropped = 0;
  double hv_front = 0.0;
  double hv_archive = 0.0;
};

/**
 * HV(front) - HV(archive) in the space normalized by the front's bounding
 * box, both w.r.t. the front's reference point. An archive without a
 * reference point adopts the front's.
 */
inline DeltaHv delta_hv(const ParetoArchive& archive, const ReferenceFront& front) {
  const Vector& ref = front.reference_point;
  if (archive.reference_point().size() != 0) {
    detail::require(archive.reference_point().size() == ref.size() &&
                        (archive.reference_point().array() == ref.array()).all(),
                    "archive and front reference points differ");
  }
  if (!archive.empty()) detail::require_same_size(archive.entries().front().f.size(), ref.size(), "archive objective");

  const Normalization nm = front.normalization();
  std::vector<Vector> pts;
  pts.reserve(archive.size());
  for (const auto& e : archive.entries()) pts.push_back(((e.f - nm.f_min).array() / nm.range().array()).matrix());

  DeltaHv out;
  out.dropped = count_outside_reference(pts, ref);
  out.hv_front = hypervolume(front.normalized_points(), ref);
  out.hv_archive = pts.empty() ? 0.0 : hypervolume(pts, ref);
  out.delta = out.hv_front - out.hv_archive;
  return out;
}

}  // namespace stch

#endif  // STCH_METRICS_ARCHIVE_HPP
