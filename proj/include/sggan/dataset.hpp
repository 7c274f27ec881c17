#ifndef SGGAN_DATASET_HPP
#define SGGAN_DATASET_HPP

#include "sggan/image.hpp"
#include "sggan/rng.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sggan {

struct ManifestEntry {
    std::string split;       // "train" or "test"
    std::string subject_id;
    std::string thermal_path;
    std::string visible_path;
    std::string mask_path;   // empty when the record has no mask ("-" on disk)
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;

    std::vector<ManifestEntry> split_entries(const std::string& split) const;
    std::vector<std::string> subjects(const std::string& split) const;  // unique, sorted
};

// One record per line: split<TAB>subject_id<TAB>thermal<TAB>visible<TAB>mask|-
DatasetManifest read_manifest(const std::string& path);
void write_manifest(const std::string& path, const DatasetManifest& manifest);

// Duplicate paths within a split, unknown split tags, empty subject ids, and
// train/test subject overlap all throw std::invalid_argument.
void validate_manifest(const DatasetManifest& manifest);

struct PairedSample {
    Image thermal;
    Image visible;
    std::string subject_id;
    std::optional<SemanticLabelMap> semantic_truth;  // 11 one-hot channels when present
};

// Reads and normalizes the images named by one manifest entry.
// Throws IoError for unreadable files, ShapeError for misaligned pairs.
PairedSample load_pair(const ManifestEntry& entry);

struct AugmentConfig {
    int load_size = 286;  // rescale target before cropping
    int crop_size = 256;
    bool random_flip = true;
};

// The geometric transform actually applied, for alignment checks.
struct AugmentRecord {
    int off_y = 0;
    int off_x = 0;
    bool flipped = false;
};

// Rescales, random-crops, and possibly mirrors the pair. One draw of
// transform parameters is applied identically to thermal, visible, and mask.
PairedSample augment(const PairedSample& pair, const AugmentConfig& cfg, Rng& rng,
                     AugmentRecord* record = nullptr);

}

#endif
