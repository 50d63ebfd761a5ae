#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tgs {

// Per-snippet abnormal scores in [0,1].
struct ScoreSeries {
    std::vector<double> values;

    std::size_t length() const { return values.size(); }
};

// A detected local maximum. v1/v2 are the lengths of the strictly monotone
// runs entering and leaving the peak; the width is min(v1, v2) and sigma the
// sample standard deviation of the scores over [pos - width, pos + width],
// floored at the configured minimum.
struct Peak {
    std::size_t position = 0;
    double score_at_peak = 0.0;
    std::size_t v1 = 0;
    std::size_t v2 = 0;
    std::size_t width = 0;
    double sigma = 0.0;
};

// Binary support mask over the series plus the peak it was grown from.
struct GaussianKernel {
    std::vector<std::uint8_t> support_mask;
    Peak peak;
};

struct PseudoLabel {
    std::vector<double> targets;
};

enum class TailMode { truncated, full };
enum class ClampMode { clamp };

struct SplatConfig {
    double prominence_threshold = 0.2;  // valid range (0,1)
    double sigma_floor = 0.5;
    ClampMode clamp_mode = ClampMode::clamp;
    TailMode tail_mode = TailMode::truncated;
};

// All interior strict 5-window maxima whose prominence (score minus window
// minimum) reaches the threshold, in ascending position order. Series shorter
// than 5 have no interior window and yield no peaks.
std::vector<Peak> detect_peaks(const ScoreSeries& scores, const SplatConfig& cfg);

// Support mask per the three-case rule: 1 at the peak, 1 inside the width
// where the score reaches score_at_peak - sigma, 0 elsewhere.
GaussianKernel init_kernel(const ScoreSeries& scores, const Peak& peak);

// f(t) = mask * exp(-(t - pos)^2 / (2 sigma^2)); in full tail mode the mask
// is replaced by 1 everywhere.
std::vector<double> splat_kernel(const GaussianKernel& kernel, std::size_t T,
                                 const SplatConfig& cfg);

// Elementwise clamp of the kernel sum to [0,1]. No kernels -> all zeros.
PseudoLabel render_pseudo_labels(const std::vector<GaussianKernel>& kernels, std::size_t T,
                                 const SplatConfig& cfg);

// detect -> init -> splat -> render.
PseudoLabel make_targets(const ScoreSeries& scores, const SplatConfig& cfg);

// CSV with a single `score` header line, one value per line.
ScoreSeries read_score_csv(const std::string& path);
void write_score_csv(const std::string& path, const std::vector<double>& values,
                     const std::string& header = "score");

}  // namespace tgs
