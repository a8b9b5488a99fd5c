#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pbv/common.hpp"

namespace pbv {

// =========================================================================
// Images
// =========================================================================

/// Eye-center anchor and the scale reference (corner-to-corner distance or
/// sclera radius, depending on the dataset style) attached to a normalized
/// image.
struct EyeAnchor {
    double x = 0.0;
    double y = 0.0;
    double scale_ref = 0.0; // pixels, > 0
};

/// 8-bit single-channel raster, row major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;
    std::optional<EyeAnchor> anchor;

    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
};

GrayImage make_image(int width, int height, std::uint8_t fill = 0);
void validate_image(const GrayImage& img);

// =========================================================================
// Templates
// =========================================================================

enum class TemplateKind : std::uint8_t {
    RealVector = 0,
    ComplexVector = 1,
    CodeHistogram = 2,
    KeypointSet = 3,
    Embedding = 4,
};

const char* kind_name(TemplateKind k);

/// Feature container for one sample under one comparator.
///
/// payload layout by kind:
///   real-vector / embedding: product(dims) doubles
///   complex-vector:          product(dims) complex values, interleaved (re,im)
///   code-histogram:          product(dims) non-negative integer counts
///   keypoint-set:            dims = [n,132]; per point (x,y,scale,orientation,d0..d127)
struct Template {
    std::string comparator_id;
    TemplateKind kind = TemplateKind::RealVector;
    std::vector<std::uint64_t> dims;
    std::vector<double> payload;
};

std::uint64_t dim_product(const std::vector<std::uint64_t>& dims);
void validate_template(const Template& t);

/// Binary format: magic "PTPL", version byte 1, kind byte, length-prefixed
/// comparator id, dim count and dims as little-endian u64, then the payload
/// as little-endian f64 (complex interleaved) or little-endian u64 counts
/// for code histograms. Round-trips bit-exactly.
void write_template(const Template& t, const std::string& path);
Template read_template(const std::string& path);

std::string serialize_template(const Template& t);
Template deserialize_template(std::string_view bytes);

// =========================================================================
// Samples, trials, scores
// =========================================================================

struct SampleRef {
    std::string subject;
    char eye = 'L'; // 'L' or 'R'
    std::string sensor;
    int index = 1; // 1-based image number
    std::string path;

    /// "subject:eye:sensor:index" — unique within a manifest.
    std::string key() const;
};

/// Key with ':' replaced by '_', for use in filenames.
std::string sanitize_key(const std::string& key);

/// CSV with header subject,eye,sensor,index,path. Rejects duplicate
/// (subject,eye,sensor,index) keys and malformed rows (line number reported).
std::vector<SampleRef> read_manifest(const std::string& path);
void write_manifest(const std::vector<SampleRef>& rows, const std::string& path);

enum class TrialLabel : std::uint8_t { NonTarget = 0, Target = 1 };
enum class TrialMode : std::uint8_t { SameSensor = 0, CrossSensor = 1 };

struct Trial {
    std::string trial_id; // "probeKey|galleryKey"
    TrialLabel label = TrialLabel::NonTarget;
    TrialMode mode = TrialMode::SameSensor;
    std::string probe_key;
    std::string gallery_key;
};

struct TrialSet {
    std::vector<Trial> trials;
};

/// CSV with header trial_id,label,mode,probe_key,gallery_key (label 1/0,
/// mode same/cross).
void write_trials(const TrialSet& set, const std::string& path);
TrialSet read_trials(const std::string& path);

struct ScoreRow {
    std::string trial_id;
    int label = 0; // 1 target, 0 nontarget
    std::string comparator;
    double score = 0.0;
};

/// Long-form score table; at most one row per (trial_id, comparator).
struct ScoreTable {
    std::vector<ScoreRow> rows;
};

/// CSV with header trial_id,label,comparator,score.
void write_scores(const ScoreTable& table, const std::string& path);
ScoreTable read_scores(const std::string& path);

std::vector<std::string> comparators_in(const ScoreTable& table);

} // namespace pbv
