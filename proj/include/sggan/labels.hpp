#ifndef SGGAN_LABELS_HPP
#define SGGAN_LABELS_HPP

#include "sggan/image.hpp"

#include <vector>

namespace sggan {

// Face-parsing source classes. Index values are the on-disk mask codes.
enum FaceClass : int {
    kBackground = 0,
    kSkin,
    kLeftBrow,
    kRightBrow,
    kLeftEye,
    kRightEye,
    kNose,
    kUpperLip,
    kInnerMouth,
    kLowerLip,
    kHair,
};
inline constexpr int kNumFaceClasses = 11;

// Maps the 11 source classes onto K target classes.
struct LabelGrouping {
    std::vector<int> mapping;  // size 11, entries in 0..k-1
    int k = 0;

    // No-op grouping: every class keeps its index.
    static LabelGrouping identity();
    // Salient facial components (brows, eyes, nose, lips, inner mouth) vs.
    // everything else. The default grouping.
    static LabelGrouping two_class();

    void validate() const;  // throws std::invalid_argument on a bad table
};

// Sums source probability channels into their target channels. Per-pixel
// totals are conserved.
SemanticLabelMap group_labels(const SemanticLabelMap& map, const LabelGrouping& grouping);

}

#endif
