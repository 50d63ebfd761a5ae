#include "tgs/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "tgs/data.hpp"

namespace tgs {

double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("roc_auc: score/label length mismatch");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (int l : labels) n_pos += (l != 0);
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw std::domain_error("roc_auc: undefined metric, only one class present");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Average ranks over tied score groups, then the Mann-Whitney statistic.
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * double(i + 1 + j + 1);
        for (std::size_t t = i; t <= j; ++t)
            if (labels[order[t]] != 0) rank_sum_pos += avg_rank;
        i = j + 1;
    }
    const double u = rank_sum_pos - 0.5 * double(n_pos) * double(n_pos + 1);
    return u / (double(n_pos) * double(n_neg));
}

double average_precision(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("average_precision: score/label length mismatch");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (int l : labels) n_pos += (l != 0);
    if (n_pos == 0) throw std::domain_error("average_precision: undefined metric, no positives");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });

    double ap = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[order[i]] != 0) {
            ++hits;
            ap += double(hits) / double(i + 1);
        }
    }
    return ap / double(n_pos);
}

namespace {

void concat_video(const VideoRecord& rec, const std::vector<double>& video_scores,
                  std::vector<double>& scores, std::vector<int>& labels) {
    if (video_scores.size() != rec.length())
        throw std::invalid_argument("metrics: score length does not match video " + rec.id);
    for (std::size_t t = 0; t < video_scores.size(); ++t) {
        scores.push_back(video_scores[t]);
        labels.push_back(rec.video_label == 0 ? 0 : int(rec.snippet_gt[t]));
    }
}

}  // namespace

std::pair<double, double> abnormal_only(const std::vector<VideoRecord>& records,
                                        const std::vector<std::vector<double>>& scores) {
    if (records.size() != scores.size())
        throw std::invalid_argument("abnormal_only: record/score count mismatch");
    std::vector<double> s;
    std::vector<int> l;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const VideoRecord& rec = records[i];
        if (rec.video_label == 0) continue;
        if (rec.snippet_gt.size() != rec.length())
            throw std::invalid_argument("abnormal_only: missing snippet ground truth for " + rec.id);
        const bool has_pos = std::find(rec.snippet_gt.begin(), rec.snippet_gt.end(), 1) !=
                             rec.snippet_gt.end();
        const bool has_neg = std::find(rec.snippet_gt.begin(), rec.snippet_gt.end(), 0) !=
                             rec.snippet_gt.end();
        if (!has_pos || !has_neg) continue;
        concat_video(rec, scores[i], s, l);
    }
    if (s.empty())
        throw std::domain_error("abnormal_only: no abnormal videos with mixed snippets");
    return {roc_auc(s, l), average_precision(s, l)};
}

std::map<int, double> per_class_auc(const std::vector<VideoRecord>& records,
                                    const std::vector<std::vector<double>>& scores) {
    if (records.size() != scores.size())
        throw std::invalid_argument("per_class_auc: record/score count mismatch");
    std::map<int, double> out;
    std::vector<int> classes;
    for (const VideoRecord& rec : records)
        if (rec.video_label != 0 && std::find(classes.begin(), classes.end(), rec.class_id) ==
                                        classes.end())
            classes.push_back(rec.class_id);
    std::sort(classes.begin(), classes.end());

    for (int c : classes) {
        std::vector<double> s;
        std::vector<int> l;
        for (std::size_t i = 0; i < records.size(); ++i) {
            const VideoRecord& rec = records[i];
            if (rec.video_label != 0 && rec.class_id != c) continue;
            concat_video(rec, scores[i], s, l);
        }
        out[c] = roc_auc(s, l);
    }
    return out;
}

std::string EvalResult::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"auc\":" << auc << ",\"ap\":" << ap << ",\"auc_a\":" << auc_a
       << ",\"ap_a\":" << ap_a << ",\"per_class_auc\":{";
    bool first = true;
    for (const auto& [c, v] : per_class_auc) {
        if (!first) os << ",";
        first = false;
        os << "\"" << c << "\":" << v;
    }
    os << "}}";
    return os.str();
}

std::string EvalResult::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "metric,value\n";
    os << "auc," << auc << "\n";
    os << "ap," << ap << "\n";
    os << "auc_a," << auc_a << "\n";
    os << "ap_a," << ap_a << "\n";
    for (const auto& [c, v] : per_class_auc) os << "auc_class_" << c << "," << v << "\n";
    return os.str();
}

}  // namespace tgs
