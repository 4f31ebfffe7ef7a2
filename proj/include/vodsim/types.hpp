#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vodsim {

// Thrown when a model parameter set is unusable (bad bounds, exhausted
// rejection sampling, non-positive predicted times, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when the view-scale search cannot reach the requested
// frequently-accessed-video fraction.
class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cloud storage classes, ordered from most to least accessible.
enum class StorageTier : int {
  kStandard = 1,    // S3 Standard
  kStandardIA = 2,  // S3 Standard-IA
  kOneZoneIA = 3,   // S3 One Zone-IA
  kGlacier = 4,     // S3 Glacier
};

inline constexpr int kNumTiers = 4;

// One group of pictures: the unit of store/transcode decisions.
struct Gop {
  std::uint32_t index = 0;        // 1-based position inside the video
  double size_mb = 0.0;           // S_ij
  double transcode_time_s = 0.0;  // tau_ij
  double est_views = 0.0;         // xi_ij, filled by the cost module
};

struct Video {
  std::uint64_t id = 0;
  double views = 0.0;  // gamma_i, views per month
  std::vector<Gop> gops;
};

using Repository = std::vector<Video>;

// GOP size/count statistics of the fitted Gaussians (sizes in kilobytes).
struct GopStats {
  double size_mean_kb = 655.08;
  double size_std_kb = 201.44;
  double size_min_kb = 1.91;
  double size_max_kb = 2192.65;
  double count_mean = 1262.79;
  double count_std = 271.46;
  int count_min = 580;
  int count_max = 2018;

  void validate() const {
    if (!(size_min_kb < size_mean_kb && size_mean_kb < size_max_kb))
      throw ConfigError("GopStats: size bounds must bracket the mean");
    if (!(count_min <= count_mean && count_mean <= count_max))
      throw ConfigError("GopStats: count bounds must bracket the mean");
    if (size_std_kb < 0.0 || count_std < 0.0)
      throw ConfigError("GopStats: negative standard deviation");
    if (size_min_kb <= 0.0 || count_min < 1)
      throw ConfigError("GopStats: sizes and counts must be positive");
  }
};

// Linear map from GOP size to transcoding time. The regression
// coefficients are configuration; only relative policy costs depend on
// them.
struct TranscodeTimeModel {
  double slope_s_per_kb = 7.5e-4;
  double intercept_s = 0.0;

  void validate() const {
    if (slope_s_per_kb < 0.0 || intercept_s < 0.0)
      throw ConfigError("TranscodeTimeModel: negative coefficients");
    if (slope_s_per_kb == 0.0 && intercept_s == 0.0)
      throw ConfigError("TranscodeTimeModel: model predicts zero time");
  }
};

// Per-video monthly views are view_scale * Weibull(shape, scale).
struct ViewModel {
  double weibull_shape = 1.0;
  double weibull_scale = 1.0;
  double view_scale = 1.0;

  void validate() const {
    if (weibull_shape <= 0.0 || weibull_scale <= 0.0)
      throw ConfigError("ViewModel: Weibull coefficients must be positive");
    if (view_scale < 0.0) throw ConfigError("ViewModel: negative view_scale");
  }
};

// Long-tail exponent of the per-GOP view estimate, Eq. xi = gamma / j^alpha.
struct DecayModel {
  double alpha = 0.1;

  void validate() const {
    if (alpha <= 0.0) throw ConfigError("DecayModel: alpha must be positive");
  }
};

// AWS list prices. Storage in $/GB-month, transcoding in $/VM-hour.
struct PricingCatalog {
  double storage_tier1 = 0.023;   // S3 Standard
  double storage_tier2 = 0.0125;  // S3 Standard-IA
  double storage_tier3 = 0.01;    // S3 One Zone-IA
  double storage_tier4 = 0.001;   // S3 Glacier
  double transcode_per_hour = 0.026;  // t2-small
  double cdn_per_gb_month = 0.085;    // CloudFront
  bool cdn_enabled = false;
  double cdn_replication = 1.0;

  double tier_price(StorageTier tier) const {
    switch (tier) {
      case StorageTier::kStandard: return storage_tier1;
      case StorageTier::kStandardIA: return storage_tier2;
      case StorageTier::kOneZoneIA: return storage_tier3;
      case StorageTier::kGlacier: return storage_tier4;
    }
    throw std::invalid_argument("tier_price: tier out of range");
  }

  void validate() const {
    if (!(storage_tier1 > storage_tier2 && storage_tier2 > storage_tier3 &&
          storage_tier3 > storage_tier4 && storage_tier4 > 0.0))
      throw ConfigError("PricingCatalog: tier prices must strictly decrease");
    if (transcode_per_hour <= 0.0)
      throw ConfigError("PricingCatalog: transcode price must be positive");
    if (cdn_per_gb_month < 0.0 || cdn_replication < 0.0)
      throw ConfigError("PricingCatalog: negative CDN parameters");
  }
};

inline StorageTier tier_from_int(int t) {
  if (t < 1 || t > kNumTiers)
    throw std::invalid_argument("tier_from_int: tier must be in [1,4]");
  return static_cast<StorageTier>(t);
}

}  // namespace vodsim
