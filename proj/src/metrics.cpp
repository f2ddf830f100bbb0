#include "hanet/metrics.hpp"

#include <algorithm>

#include "hanet/errors.hpp"

namespace hanet {

namespace {

void require_same_size(const std::vector<int>& pred, const std::vector<int>& truth,
                       const char* op) {
    if (pred.size() != truth.size()) {
        throw DimensionError(std::string(op) + ": mask sizes differ: " +
                             std::to_string(pred.size()) + " vs " +
                             std::to_string(truth.size()));
    }
}

}  // namespace

ConfusionCounts confusion(const std::vector<int>& pred, const std::vector<int>& truth,
                          int class_id) {
    require_same_size(pred, truth, "confusion");
    ConfusionCounts c;
    for (size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred[i] == class_id;
        const bool t = truth[i] == class_id;
        if (p && t)
            ++c.tp;
        else if (p && !t)
            ++c.fp;
        else if (!p && t)
            ++c.fn;
        else
            ++c.tn;
    }
    return c;
}

double dice(const std::vector<int>& pred, const std::vector<int>& truth, int class_id) {
    require_same_size(pred, truth, "dice");
    const ConfusionCounts c = confusion(pred, truth, class_id);
    const size_t denom = 2 * c.tp + c.fp + c.fn;
    if (denom == 0) return 1.0;  // both sets empty
    return 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

double mdice(const std::vector<int>& pred, const std::vector<int>& truth,
             const std::vector<int>& class_ids) {
    if (class_ids.empty()) throw ConfigError("mdice: empty class list");
    double total = 0.0;
    for (int id : class_ids) total += dice(pred, truth, id);
    return total / static_cast<double>(class_ids.size());
}

double mdice(const std::vector<double>& per_class_dice) {
    if (per_class_dice.empty()) throw ConfigError("mdice: empty class list");
    double total = 0.0;
    for (double d : per_class_dice) total += d;
    return total / static_cast<double>(per_class_dice.size());
}

namespace {

// vertical extent (max row - min row + 1) of the region; 0 when empty
size_t vertical_extent(const std::vector<int>& mask, size_t height, size_t width,
                       bool cup_only) {
    size_t lo = height, hi = 0;
    bool any = false;
    for (size_t y = 0; y < height; ++y) {
        for (size_t x = 0; x < width; ++x) {
            const int v = mask[y * width + x];
            if (cup_only ? (v == 2) : (v == 1 || v == 2)) {
                if (!any) lo = y;
                hi = y;
                any = true;
            }
        }
    }
    return any ? hi - lo + 1 : 0;
}

double cdr(const std::vector<int>& mask, size_t height, size_t width) {
    const size_t cup = vertical_extent(mask, height, width, true);
    const size_t disc = vertical_extent(mask, height, width, false);
    if (cup == 0 || disc == 0) return 0.0;
    return static_cast<double>(cup) / static_cast<double>(disc);
}

}  // namespace

double cdr_error(const std::vector<int>& pred, const std::vector<int>& truth, size_t height,
                 size_t width) {
    require_same_size(pred, truth, "cdr_error");
    if (pred.size() != height * width) {
        throw DimensionError("cdr_error: mask size " + std::to_string(pred.size()) +
                             " vs extents " + std::to_string(height) + "x" +
                             std::to_string(width));
    }
    if (vertical_extent(truth, height, width, false) == 0) {
        throw DataError("cdr_error: ground truth has no disc region");
    }
    return std::abs(cdr(pred, height, width) - cdr(truth, height, width));
}

BinaryStats binary_stats(const std::vector<int>& pred, const std::vector<int>& truth) {
    require_same_size(pred, truth, "binary_stats");
    ConfusionCounts c;
    for (size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred[i] != 0;
        const bool t = truth[i] != 0;
        if (p && t)
            ++c.tp;
        else if (p && !t)
            ++c.fp;
        else if (!p && t)
            ++c.fn;
        else
            ++c.tn;
    }
    const auto ratio = [](size_t num, size_t den) {
        return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    BinaryStats s;
    s.acc = ratio(c.tp + c.tn, c.tp + c.fp + c.fn + c.tn);
    s.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
    s.se = ratio(c.tp, c.tp + c.fn);
    s.sp = ratio(c.tn, c.tn + c.fp);
    s.iou = ratio(c.tp, c.tp + c.fp + c.fn);
    return s;
}

}  // namespace hanet
