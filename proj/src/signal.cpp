#include "tgs/signal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tgs {

namespace {

void validate_scores(const ScoreSeries& scores) {
    if (scores.values.empty()) throw std::invalid_argument("score series: empty");
    for (double v : scores.values) {
        if (std::isnan(v)) throw std::invalid_argument("score series: NaN value");
        if (v < 0.0 || v > 1.0)
            throw std::invalid_argument("score series: value outside [0,1]");
    }
}

double sample_stddev(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    const std::size_t n = hi - lo + 1;
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) mean += v[i];
    mean /= double(n);
    double ss = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) ss += (v[i] - mean) * (v[i] - mean);
    return std::sqrt(ss / double(n - 1));
}

}  // namespace

std::vector<Peak> detect_peaks(const ScoreSeries& scores, const SplatConfig& cfg) {
    validate_scores(scores);
    if (cfg.prominence_threshold <= 0.0 || cfg.prominence_threshold >= 1.0)
        throw std::invalid_argument("splat config: prominence threshold must lie in (0,1)");
    if (cfg.sigma_floor <= 0.0)
        throw std::invalid_argument("splat config: sigma floor must be positive");

    const auto& v = scores.values;
    const std::size_t T = v.size();
    std::vector<Peak> peaks;
    if (T < 5) return peaks;  // no interior 5-point window

    for (std::size_t t = 2; t + 2 < T; ++t) {
        const bool strict_max = v[t] > v[t - 2] && v[t] > v[t - 1] && v[t] > v[t + 1] &&
                                v[t] > v[t + 2];
        if (!strict_max) continue;
        const double wmin = std::min({v[t - 2], v[t - 1], v[t], v[t + 1], v[t + 2]});
        if (v[t] - wmin < cfg.prominence_threshold) continue;

        Peak p;
        p.position = t;
        p.score_at_peak = v[t];
        // maximal strictly monotone runs adjacent to the peak
        std::size_t v1 = 0;
        while (t - v1 > 0 && v[t - v1 - 1] < v[t - v1]) ++v1;
        std::size_t v2 = 0;
        while (t + v2 + 1 < T && v[t + v2 + 1] < v[t + v2]) ++v2;
        p.v1 = v1;
        p.v2 = v2;
        p.width = std::min(v1, v2);
        p.sigma = std::max(sample_stddev(v, t - p.width, t + p.width), cfg.sigma_floor);
        peaks.push_back(p);
    }
    return peaks;
}

GaussianKernel init_kernel(const ScoreSeries& scores, const Peak& peak) {
    validate_scores(scores);
    const auto& v = scores.values;
    const std::size_t T = v.size();
    if (peak.position >= T) throw std::invalid_argument("kernel: peak position out of range");
    if (peak.width > peak.position || peak.position + peak.width >= T)
        throw std::invalid_argument("kernel: peak width exceeds series bounds");

    GaussianKernel k;
    k.peak = peak;
    k.support_mask.assign(T, 0);
    k.support_mask[peak.position] = 1;
    const double cutoff = peak.score_at_peak - peak.sigma;
    for (std::size_t t = peak.position - peak.width; t <= peak.position + peak.width; ++t)
        if (v[t] >= cutoff) k.support_mask[t] = 1;
    return k;
}

std::vector<double> splat_kernel(const GaussianKernel& kernel, std::size_t T,
                                 const SplatConfig& cfg) {
    if (kernel.support_mask.size() != T)
        throw std::invalid_argument("splat: kernel length does not match series length");
    if (kernel.peak.sigma <= 0.0) throw std::invalid_argument("splat: non-positive sigma");

    std::vector<double> f(T, 0.0);
    const double denom = 2.0 * kernel.peak.sigma * kernel.peak.sigma;
    for (std::size_t t = 0; t < T; ++t) {
        if (cfg.tail_mode == TailMode::truncated && kernel.support_mask[t] == 0) continue;
        const double dist = double(t) - double(kernel.peak.position);
        f[t] = std::exp(-(dist * dist) / denom);
    }
    return f;
}

PseudoLabel render_pseudo_labels(const std::vector<GaussianKernel>& kernels, std::size_t T,
                                 const SplatConfig& cfg) {
    for (const auto& k : kernels)
        if (k.support_mask.size() != T)
            throw std::invalid_argument("render: kernel length does not match series length");

    std::vector<double> sum(T, 0.0);
    for (const auto& k : kernels) {
        const std::vector<double> f = splat_kernel(k, T, cfg);
        for (std::size_t t = 0; t < T; ++t) sum[t] += f[t];
    }
    for (double& v : sum) v = std::clamp(v, 0.0, 1.0);
    return PseudoLabel{std::move(sum)};
}

PseudoLabel make_targets(const ScoreSeries& scores, const SplatConfig& cfg) {
    const std::vector<Peak> peaks = detect_peaks(scores, cfg);
    std::vector<GaussianKernel> kernels;
    kernels.reserve(peaks.size());
    for (const Peak& p : peaks) kernels.push_back(init_kernel(scores, p));
    return render_pseudo_labels(kernels, scores.length(), cfg);
}

ScoreSeries read_score_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open score csv: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("score csv: empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "score")
        throw std::invalid_argument("score csv: expected header 'score', got '" + line + "'");
    ScoreSeries s;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(line, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("score csv: bad value at line " + std::to_string(lineno));
        }
        if (pos != line.size())
            throw std::invalid_argument("score csv: trailing characters at line " +
                                        std::to_string(lineno));
        s.values.push_back(v);
    }
    if (s.values.empty()) throw std::invalid_argument("score csv: no values: " + path);
    return s;
}

void write_score_csv(const std::string& path, const std::vector<double>& values,
                     const std::string& header) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write csv: " + path);
    out << header << "\n";
    out.precision(17);
    for (double v : values) out << v << "\n";
}

}  // namespace tgs
