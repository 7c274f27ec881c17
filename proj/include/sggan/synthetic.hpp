#ifndef SGGAN_SYNTHETIC_HPP
#define SGGAN_SYNTHETIC_HPP

#include "sggan/dataset.hpp"

#include <cstdint>
#include <string>

namespace sggan {

// Procedural paired-face dataset: parametric visible renders, exact class
// masks, and a deterministic pseudo-thermal counterpart of each render.
struct SyntheticConfig {
    int n_subjects = 8;
    int pairs_per_subject = 4;
    int image_size = 64;          // square, multiple of 8
    std::uint64_t seed = 1;
    double test_fraction = 0.25;  // share of subjects held out
    int style = 0;                // 0 or 1: two appearance regimes for transfer runs
};

// Writes <id>_visible.png / _thermal.png / _mask.png per sample plus
// manifest.tsv into out_dir, and returns the manifest. Subjects are split
// disjointly into train/test; below 4 subjects everything goes to train and a
// warning is printed.
DatasetManifest generate_synthetic_dataset(const SyntheticConfig& cfg,
                                           const std::string& out_dir);

}

#endif
