#include "sggan/labels.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace sggan {

LabelGrouping LabelGrouping::identity() {
    LabelGrouping g;
    g.k = kNumFaceClasses;
    g.mapping.resize(kNumFaceClasses);
    for (int i = 0; i < kNumFaceClasses; ++i) g.mapping[i] = i;
    return g;
}

LabelGrouping LabelGrouping::two_class() {
    LabelGrouping g;
    g.k = 2;
    g.mapping.assign(kNumFaceClasses, 0);
    for (int cls : {kLeftBrow, kRightBrow, kLeftEye, kRightEye, kNose, kUpperLip,
                    kInnerMouth, kLowerLip})
        g.mapping[cls] = 1;
    return g;
}

void LabelGrouping::validate() const {
    if (int(mapping.size()) != kNumFaceClasses)
        throw std::invalid_argument("label grouping must map all " +
                                    std::to_string(kNumFaceClasses) + " classes, has " +
                                    std::to_string(mapping.size()));
    if (k < 2 || k > kNumFaceClasses)
        throw std::invalid_argument("label grouping target count out of range: " +
                                    std::to_string(k));
    std::vector<bool> seen(k, false);
    for (int t : mapping) {
        if (t < 0 || t >= k)
            throw std::invalid_argument("label grouping target " + std::to_string(t) +
                                        " outside 0.." + std::to_string(k - 1));
        seen[t] = true;
    }
    for (int t = 0; t < k; ++t)
        if (!seen[t])
            throw std::invalid_argument("label grouping target " + std::to_string(t) +
                                        " is never used");
}

SemanticLabelMap group_labels(const SemanticLabelMap& map, const LabelGrouping& grouping) {
    grouping.validate();
    if (map.classes() != kNumFaceClasses)
        throw ShapeError("group_labels expects " + std::to_string(kNumFaceClasses) +
                         " source channels, got " + std::to_string(map.classes()));
    const int n = map.probs.h * map.probs.w;
    SemanticLabelMap out;
    out.probs = Tensor(grouping.k, map.probs.h, map.probs.w);
    for (int src = 0; src < kNumFaceClasses; ++src) {
        const int dst = grouping.mapping[src];
        const double* sp = &map.probs.data[std::size_t(src) * n];
        double* dp = &out.probs.data[std::size_t(dst) * n];
        for (int i = 0; i < n; ++i) dp[i] += sp[i];
    }
    return out;
}

}
