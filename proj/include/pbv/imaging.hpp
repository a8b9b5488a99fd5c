#pragma once

#include <array>
#include <map>
#include <string>

#include "pbv/core.hpp"

namespace pbv {

enum class NormStyle { CornerBased, ScleraBased };

/// Geometric normalization target for one dataset style.
struct NormalizationSpec {
    NormStyle style = NormStyle::CornerBased;
    double target_scale = 318.0; // corner distance or sclera radius, pixels
    int out_height = 613;
    int out_width = 701;
    double vertical_offset = 56.0; // anchor sits this far above the crop center
};

/// Ground-truth annotation for one sample: either the two eye-corner points
/// or the sclera circle.
struct Annotation {
    NormStyle style = NormStyle::CornerBased;
    double x1 = 0, y1 = 0, x2 = 0, y2 = 0; // corners
    double cx = 0, cy = 0, r = 0;          // sclera circle
};

/// Row-major 2x3 affine map: out = [a b c; d e f] * [x y 1]^T.
struct Affine {
    std::array<double, 6> m{1, 0, 0, 0, 1, 0};

    std::pair<double, double> apply(double x, double y) const {
        return {m[0] * x + m[1] * y + m[2], m[3] * x + m[4] * y + m[5]};
    }
    Affine inverse() const;
};

/// Binary PGM (P5, maxval 255).
GrayImage load_pgm(const std::string& path);
void save_pgm(const GrayImage& img, const std::string& path);

/// Map taking input-image coordinates to output coordinates: rotates the
/// corner axis horizontal (corner style only), rescales so the annotation
/// measure equals spec.target_scale, and places the eye center horizontally
/// centered, vertical_offset pixels above the crop center.
Affine normalization_affine(const Annotation& ann, const NormalizationSpec& spec);

/// Anchor position in the normalized frame (same for every image under a
/// given spec).
EyeAnchor normalized_anchor(const NormalizationSpec& spec);

/// Warp into the normalized frame with a single composed affine, bicubic
/// (Catmull-Rom) sampling, edge replication outside the source frame.
GrayImage normalize_geometry(const GrayImage& img, const Annotation& ann,
                             const NormalizationSpec& spec);

/// General inverse-mapped affine warp, used by normalize_geometry and tests.
GrayImage warp_affine(const GrayImage& img, const Affine& fwd, int out_height, int out_width);

/// Contrast-limited adaptive histogram equalization. Per-tile histograms are
/// clipped at clip_limit * tile_pixel_count with the clipped mass spread
/// uniformly, CDF-equalized, and pixel mappings bilinearly interpolated
/// between tile centers.
GrayImage clahe(const GrayImage& img, int tile_rows, int tile_cols, double clip_limit);

/// Sidecar annotation CSV:
///   subject,eye,sensor,index,x1,y1,x2,y2   (corner style)
///   subject,eye,sensor,index,cx,cy,r      (sclera style)
/// keyed by sample key.
std::map<std::string, Annotation> read_annotations(const std::string& path);

} // namespace pbv
