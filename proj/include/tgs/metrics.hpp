#pragma once

#include <map>
#include <string>
#include <vector>

namespace tgs {

struct VideoRecord;  // data.hpp

struct EvalResult {
    double auc = 0.0;
    double ap = 0.0;
    double auc_a = 0.0;
    double ap_a = 0.0;
    std::map<int, double> per_class_auc;

    std::string to_json() const;
    std::string to_csv() const;
};

// Probability that a random positive outranks a random negative, ties
// counted 0.5 (Mann-Whitney). Throws std::domain_error when only one class
// is present.
double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

// AP = sum_k (R_k - R_{k-1}) P_k over descending-score prefixes. Ties are
// ordered deterministically by (score desc, index asc). Throws
// std::domain_error when no positives exist.
double average_precision(const std::vector<double>& scores, const std::vector<int>& labels);

// AUC/AP over the concatenated snippets of abnormal videos that contain both
// normal and anomalous snippets. `scores` aligns with `records` by index.
std::pair<double, double> abnormal_only(const std::vector<VideoRecord>& records,
                                        const std::vector<std::vector<double>>& scores);

// For each anomaly class: AUC over the snippets of that class's abnormal
// videos plus the snippets of every normal video. Classes absent from the
// records are omitted.
std::map<int, double> per_class_auc(const std::vector<VideoRecord>& records,
                                    const std::vector<std::vector<double>>& scores);

}  // namespace tgs
