#pragma once

#include <cstdint>
#include <vector>

namespace hanet {

struct ConfusionCounts {
    size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

// one-vs-rest counts for a single class id
ConfusionCounts confusion(const std::vector<int>& pred, const std::vector<int>& truth,
                          int class_id);

// 2|P∩T| / (|P|+|T|); both sets empty -> 1.0 (vacuous agreement)
double dice(const std::vector<int>& pred, const std::vector<int>& truth, int class_id);

// unweighted mean of per-class dice over the listed classes
double mdice(const std::vector<int>& pred, const std::vector<int>& truth,
             const std::vector<int>& class_ids);
double mdice(const std::vector<double>& per_class_dice);

// |CDR_pred - CDR_true| with CDR = vertical extent of the cup (label 2) over
// vertical extent of the disc (labels 1 and 2); empty predicted cup or disc
// gives CDR 0, empty true disc is malformed ground truth.
double cdr_error(const std::vector<int>& pred, const std::vector<int>& truth, size_t height,
                 size_t width);

struct BinaryStats {
    double acc = 0.0, f1 = 0.0, se = 0.0, sp = 0.0, iou = 0.0;
};

// pixel-level stats treating any nonzero label as foreground; 0/0 -> 1
BinaryStats binary_stats(const std::vector<int>& pred, const std::vector<int>& truth);

}  // namespace hanet
