#pragma once

#include <string>
#include <vector>

#include "pbv/core.hpp"
#include "pbv/fft.hpp"
#include "pbv/imaging.hpp"

namespace pbv {

// =========================================================================
// Parameter blocks
// =========================================================================

/// Symmetry-pattern descriptor: orientation image projected onto harmonic
/// filters over log-spaced annular rings around the eye center.
struct SafeParams {
    int scales = 6;        // S
    double sigma0 = 1.6;   // base smoothing scale
    double scale_step = 0; // K; 0 -> 2^(1/3)
    int rings = 3;         // N_f
    int harmonics = 9;     // N_h, orders -(N_h-1)/2 .. +(N_h-1)/2
    double inner_radius = 79.0;
    double outer_radius = 0.0; // 0 -> nearest image edge from the anchor
};

/// Block grid shared by the Gabor, LBP and HOG extractors. The image is
/// divided into rows x cols equal cells; the 8 cells nearest the eye anchor
/// are excluded (they are masked out in the source data and carry no
/// identity information).
struct GaborGrid {
    int rows = 7, cols = 8;
    int height = 613, width = 701;   // expected input size
    double block = 88.0;             // nominal block side, sets wavelengths
    std::vector<int> excluded;       // row-major cell indices
    std::vector<double> wavelengths; // 5 values, log-spaced block/2 .. block/16
    int orientations = 6;            // evenly spaced in [0, pi)

    int active_blocks() const { return rows * cols - static_cast<int>(excluded.size()); }
    int feature_length() const {
        return active_blocks() * static_cast<int>(wavelengths.size()) * orientations;
    }
};

/// Steerable-pyramid local-phase descriptor: 3 octave scales x 12
/// orientations + 1 low-pass residual = 37 subbands, 256-bin code histogram
/// per subband.
struct PyramidParams {
    int scales = 3;
    int orientations = 12;
    int lpq_window = 5;              // odd
    double binarize_threshold = 0.0; // bit = (response > threshold)
    int histogram_bins = 256;

    int subband_count() const { return scales * orientations + 1; }
};

/// Everything geometry-dependent for one dataset style.
struct DatasetPreset {
    std::string name;
    NormalizationSpec norm;
    SafeParams safe;
    GaborGrid grid;
    PyramidParams pyramid;
};

/// "crosseyed" or "vssiris".
DatasetPreset preset_by_name(const std::string& name);

/// Fills grid.wavelengths from grid.block and grid.excluded with the 2x4
/// cell window nearest the anchor.
void finalize_grid(GaborGrid& grid, const EyeAnchor& anchor);

// =========================================================================
// Extractors
// =========================================================================

/// Complex template, dims [S, N_f, N_h].
Template extract_safe(const GrayImage& img, const SafeParams& params);

/// Real template, length active_blocks * 30, PDF-normalized.
Template extract_gabor(const GrayImage& img, const GaborGrid& grid, int jobs = 0);

/// Real templates, length active_blocks * 8, per-block L2 then global PDF.
Template extract_lbp(const GrayImage& img, const GaborGrid& grid);
Template extract_hog(const GrayImage& img, const GaborGrid& grid);

/// Code-histogram template, dims [37, 256].
Template extract_ntnu(const GrayImage& img, const PyramidParams& params, int jobs = 0);

// Kernels exposed for the serial/parallel benchmark and tests. The serial
// variants are the straightforward reference implementations.
std::vector<cplx_pair_t> gabor_block_responses(const GrayImage& img, const GaborGrid& grid,
                                               int jobs);
std::vector<cplx_pair_t> gabor_block_responses_serial(const GrayImage& img, const GaborGrid& grid);

/// One LPQ-coded subband, 256-bin histogram; production pipeline internals.
std::vector<std::vector<double>> ntnu_subbands(const GrayImage& img, const PyramidParams& params,
                                               int jobs);

} // namespace pbv
