#include "sggan/dataset.hpp"

#include "sggan/labels.hpp"
#include "sggan/png_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sggan {

std::vector<ManifestEntry> DatasetManifest::split_entries(const std::string& split) const {
    std::vector<ManifestEntry> out;
    for (const auto& e : entries)
        if (e.split == split) out.push_back(e);
    return out;
}

std::vector<std::string> DatasetManifest::subjects(const std::string& split) const {
    std::set<std::string> s;
    for (const auto& e : entries)
        if (e.split == split) s.insert(e.subject_id);
    return {s.begin(), s.end()};
}

DatasetManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path);
    DatasetManifest manifest;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        ManifestEntry e;
        std::string mask;
        if (!std::getline(ss, e.split, '\t') || !std::getline(ss, e.subject_id, '\t') ||
            !std::getline(ss, e.thermal_path, '\t') ||
            !std::getline(ss, e.visible_path, '\t') || !std::getline(ss, mask, '\t'))
            throw std::invalid_argument("manifest line " + std::to_string(lineno) +
                                        " does not have 5 tab-separated fields");
        e.mask_path = mask == "-" ? "" : mask;
        manifest.entries.push_back(std::move(e));
    }
    validate_manifest(manifest);
    return manifest;
}

void write_manifest(const std::string& path, const DatasetManifest& manifest) {
    validate_manifest(manifest);
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest: " + path);
    for (const auto& e : manifest.entries)
        out << e.split << '\t' << e.subject_id << '\t' << e.thermal_path << '\t'
            << e.visible_path << '\t' << (e.mask_path.empty() ? "-" : e.mask_path) << '\n';
}

void validate_manifest(const DatasetManifest& manifest) {
    std::set<std::string> train_subjects, test_subjects;
    std::set<std::string> train_paths, test_paths;
    for (const auto& e : manifest.entries) {
        if (e.split != "train" && e.split != "test")
            throw std::invalid_argument("unknown split tag: " + e.split);
        if (e.subject_id.empty())
            throw std::invalid_argument("manifest entry with empty subject id");
        auto& subjects = e.split == "train" ? train_subjects : test_subjects;
        auto& paths = e.split == "train" ? train_paths : test_paths;
        subjects.insert(e.subject_id);
        for (const std::string* p : {&e.thermal_path, &e.visible_path}) {
            if (!paths.insert(*p).second)
                throw std::invalid_argument("path listed twice in split '" + e.split +
                                            "': " + *p);
        }
    }
    for (const auto& s : train_subjects)
        if (test_subjects.count(s))
            throw std::invalid_argument("subject '" + s + "' appears in both splits");
}

namespace {

SemanticLabelMap load_mask(const std::string& path, int h, int w) {
    const RasterU8 raster = read_png(path);
    if (raster.channels != 1)
        throw std::invalid_argument("mask must be single-channel: " + path);
    if (raster.height != h || raster.width != w)
        throw ShapeError("mask size differs from its pair: " + path);
    std::vector<int> idx(std::size_t(h) * w);
    for (int i = 0; i < h * w; ++i) {
        const int cls = raster.pixels[i];
        if (cls >= kNumFaceClasses)
            throw std::invalid_argument("mask value " + std::to_string(cls) +
                                        " exceeds class count in " + path);
        idx[i] = cls;
    }
    return SemanticLabelMap::from_indices(idx, h, w, kNumFaceClasses);
}

}

PairedSample load_pair(const ManifestEntry& entry) {
    const RasterU8 thermal_raw = read_png(entry.thermal_path);
    const RasterU8 visible_raw = read_png(entry.visible_path);

    PairedSample pair;
    pair.subject_id = entry.subject_id;
    pair.thermal = image_from_raster(thermal_raw, ColorSpace::kThermalReplicated);
    pair.visible = image_from_raster(visible_raw, ColorSpace::kVisibleRgb);
    if (pair.thermal.height() != pair.visible.height() ||
        pair.thermal.width() != pair.visible.width())
        throw ShapeError("pair not aligned: " + entry.thermal_path + " is " +
                         pair.thermal.pixels.shape_str() + ", " + entry.visible_path +
                         " is " + pair.visible.pixels.shape_str());
    if (!entry.mask_path.empty())
        pair.semantic_truth =
            load_mask(entry.mask_path, pair.thermal.height(), pair.thermal.width());
    return pair;
}

PairedSample augment(const PairedSample& pair, const AugmentConfig& cfg, Rng& rng,
                     AugmentRecord* record) {
    if (cfg.crop_size > cfg.load_size)
        throw std::invalid_argument("crop size " + std::to_string(cfg.crop_size) +
                                    " exceeds rescale size " + std::to_string(cfg.load_size));

    // Draw the transform once; every raster of the pair gets the same one.
    const int slack = cfg.load_size - cfg.crop_size;
    AugmentRecord rec;
    rec.off_y = slack > 0 ? rng.uniform_int(slack + 1) : 0;
    rec.off_x = slack > 0 ? rng.uniform_int(slack + 1) : 0;
    rec.flipped = cfg.random_flip && rng.bernoulli(0.5);
    if (record) *record = rec;

    auto apply = [&](const Tensor& t, bool nearest) {
        Tensor out = nearest ? resize_nearest(t, cfg.load_size, cfg.load_size)
                             : resize_bilinear(t, cfg.load_size, cfg.load_size);
        out = crop(out, rec.off_y, rec.off_x, cfg.crop_size, cfg.crop_size);
        if (rec.flipped) out = hflip(out);
        return out;
    };

    PairedSample out;
    out.subject_id = pair.subject_id;
    out.thermal.color_space = pair.thermal.color_space;
    out.thermal.pixels = apply(pair.thermal.pixels, false);
    out.visible.color_space = pair.visible.color_space;
    out.visible.pixels = apply(pair.visible.pixels, false);
    if (pair.semantic_truth) {
        SemanticLabelMap m;
        m.probs = apply(pair.semantic_truth->probs, true);
        out.semantic_truth = std::move(m);
    }
    return out;
}

}
