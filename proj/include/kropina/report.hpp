#pragma once

#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kropina {

enum class CheckStatus { pass, fail, unchecked };

/// One line of a validation or comparison report.
struct CheckItem {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  double residual = 0.0;
  double threshold = 0.0;
  std::string detail;
  bool gating = true;  ///< informational items never affect passed()
};

inline CheckItem make_check(std::string name, double residual, double threshold,
                            std::string detail = "", bool gating = true) {
  CheckItem item;
  item.name = std::move(name);
  item.status = residual <= threshold ? CheckStatus::pass : CheckStatus::fail;
  item.residual = residual;
  item.threshold = threshold;
  item.detail = std::move(detail);
  item.gating = gating;
  return item;
}

/// Itemized pass/fail report with residuals. Checks are report-style: they
/// collect findings instead of throwing, so defective inputs can still be
/// inspected.
class CheckReport {
 public:
  void add(CheckItem item) { items_.push_back(std::move(item)); }

  void merge(const CheckReport& other) {
    for (const auto& item : other.items_) items_.push_back(item);
  }

  const std::vector<CheckItem>& items() const { return items_; }

  /// True when no gating item failed. Unchecked items do not fail.
  bool passed() const {
    for (const auto& item : items_)
      if (item.gating && item.status == CheckStatus::fail) return false;
    return true;
  }

  double max_residual() const {
    double worst = 0.0;
    for (const auto& item : items_)
      if (item.status != CheckStatus::unchecked && item.residual > worst)
        worst = item.residual;
    return worst;
  }

  const CheckItem* find(std::string_view name) const {
    for (const auto& item : items_)
      if (item.name == name) return &item;
    return nullptr;
  }

  std::string to_text() const {
    std::string out;
    char buf[192];
    for (const auto& item : items_) {
      const char* tag = item.status == CheckStatus::pass        ? "PASS"
                        : item.status == CheckStatus::fail      ? "FAIL"
                                                                : "UNCHECKED";
      if (item.status == CheckStatus::unchecked) {
        std::snprintf(buf, sizeof(buf), "  [%s] %-34s %s\n", tag,
                      item.name.c_str(), item.detail.c_str());
      } else {
        std::snprintf(buf, sizeof(buf),
                      "  [%s] %-34s residual %.3e  (tol %.3e)%s%s%s\n", tag,
                      item.name.c_str(), item.residual, item.threshold,
                      item.gating ? "" : "  [informational]",
                      item.detail.empty() ? "" : "  ", item.detail.c_str());
      }
      out += buf;
    }
    return out;
  }

  /// Names and residuals of the failing gating items, for error messages.
  std::string failure_summary() const {
    std::string out;
    char buf[128];
    for (const auto& item : items_) {
      if (!item.gating || item.status != CheckStatus::fail) continue;
      std::snprintf(buf, sizeof(buf), "%s%s (residual %.3e, tol %.3e)",
                    out.empty() ? "" : "; ", item.name.c_str(), item.residual,
                    item.threshold);
      out += buf;
    }
    return out;
  }

 private:
  std::vector<CheckItem> items_;
};

}  // namespace kropina
