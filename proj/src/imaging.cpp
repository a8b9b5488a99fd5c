#include "pbv/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pbv {

// -------------------------------------------------------------------------
// PGM
// -------------------------------------------------------------------------

namespace {

// Reads the next whitespace-delimited token, skipping '#' comments.
std::string next_pgm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

} // namespace

GrayImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("io", "cannot open '" + path + "'");
    std::string magic = next_pgm_token(in);
    if (magic != "P5") fail("pgm", path + ": unsupported format (expected binary P5)");
    long w = parse_long(next_pgm_token(in), path + " width");
    long h = parse_long(next_pgm_token(in), path + " height");
    long maxval = parse_long(next_pgm_token(in), path + " maxval");
    if (w <= 0 || h <= 0) fail("pgm", path + ": bad dimensions");
    if (maxval != 255) fail("pgm", path + ": unsupported maxval " + std::to_string(maxval));
    GrayImage img = make_image(static_cast<int>(w), static_cast<int>(h));
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.data.size()))
        fail("pgm", path + ": truncated pixel payload");
    return img;
}

void save_pgm(const GrayImage& img, const std::string& path) {
    validate_image(img);
    std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.data.data()), img.data.size());
    atomic_write_file(path, out);
}

// -------------------------------------------------------------------------
// Affine warp
// -------------------------------------------------------------------------

Affine Affine::inverse() const {
    double det = m[0] * m[4] - m[1] * m[3];
    if (std::fabs(det) < 1e-12) fail("imaging", "affine map is singular");
    Affine inv;
    inv.m[0] = m[4] / det;
    inv.m[1] = -m[1] / det;
    inv.m[3] = -m[3] / det;
    inv.m[4] = m[0] / det;
    inv.m[2] = -(inv.m[0] * m[2] + inv.m[1] * m[5]);
    inv.m[5] = -(inv.m[3] * m[2] + inv.m[4] * m[5]);
    return inv;
}

namespace {

inline double cubic_kernel(double t) {
    // Catmull-Rom (a = -0.5).
    const double a = -0.5;
    t = std::fabs(t);
    if (t < 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
    if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
    return 0.0;
}

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

double sample_bicubic(const GrayImage& img, double x, double y) {
    int x0 = static_cast<int>(std::floor(x));
    int y0 = static_cast<int>(std::floor(y));
    double fx = x - x0, fy = y - y0;
    double acc = 0.0;
    for (int dy = -1; dy <= 2; ++dy) {
        int yy = clampi(y0 + dy, 0, img.height - 1);
        double wy = cubic_kernel(fy - dy);
        if (wy == 0.0) continue;
        double row = 0.0;
        for (int dx = -1; dx <= 2; ++dx) {
            int xx = clampi(x0 + dx, 0, img.width - 1);
            row += cubic_kernel(fx - dx) * img.at(xx, yy);
        }
        acc += wy * row;
    }
    return acc;
}

} // namespace

GrayImage warp_affine(const GrayImage& img, const Affine& fwd, int out_height, int out_width) {
    validate_image(img);
    Affine inv = fwd.inverse();
    GrayImage out = make_image(out_width, out_height);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < out_height; ++y) {
        for (int x = 0; x < out_width; ++x) {
            auto [sx, sy] = inv.apply(x, y);
            double v = sample_bicubic(img, sx, sy);
            out.at(x, y) = static_cast<std::uint8_t>(clampi(static_cast<int>(std::lround(v)), 0, 255));
        }
    }
    return out;
}

EyeAnchor normalized_anchor(const NormalizationSpec& spec) {
    EyeAnchor a;
    a.x = (spec.out_width - 1) / 2.0;
    a.y = (spec.out_height - 1) / 2.0 - spec.vertical_offset;
    a.scale_ref = spec.target_scale;
    return a;
}

Affine normalization_affine(const Annotation& ann, const NormalizationSpec& spec) {
    if (ann.style != spec.style) fail("imaging", "annotation style does not match spec style");
    if (spec.target_scale <= 0 || spec.out_width <= 0 || spec.out_height <= 0)
        fail("imaging", "bad normalization spec");

    double cx, cy, scale, angle;
    if (spec.style == NormStyle::CornerBased) {
        double dx = ann.x2 - ann.x1, dy = ann.y2 - ann.y1;
        double dist = std::hypot(dx, dy);
        if (dist < 1e-9) fail("imaging", "degenerate annotation: coincident corners");
        cx = 0.5 * (ann.x1 + ann.x2);
        cy = 0.5 * (ann.y1 + ann.y2);
        scale = spec.target_scale / dist;
        angle = -std::atan2(dy, dx); // rotate the corner axis horizontal
    } else {
        if (ann.r <= 0) fail("imaging", "degenerate annotation: sclera radius <= 0");
        cx = ann.cx;
        cy = ann.cy;
        scale = spec.target_scale / ann.r;
        angle = 0.0;
    }

    EyeAnchor target = normalized_anchor(spec);
    double ca = std::cos(angle) * scale, sa = std::sin(angle) * scale;
    Affine a;
    // Rotate+scale about (cx,cy), then translate the eye center onto the
    // anchor position of the output frame.
    a.m[0] = ca;
    a.m[1] = -sa;
    a.m[2] = target.x - (ca * cx - sa * cy);
    a.m[3] = sa;
    a.m[4] = ca;
    a.m[5] = target.y - (sa * cx + ca * cy);
    return a;
}

GrayImage normalize_geometry(const GrayImage& img, const Annotation& ann,
                             const NormalizationSpec& spec) {
    Affine fwd = normalization_affine(ann, spec);
    GrayImage out = warp_affine(img, fwd, spec.out_height, spec.out_width);
    out.anchor = normalized_anchor(spec);
    return out;
}

// -------------------------------------------------------------------------
// CLAHE
// -------------------------------------------------------------------------

GrayImage clahe(const GrayImage& img, int tile_rows, int tile_cols, double clip_limit) {
    validate_image(img);
    if (tile_rows < 1 || tile_cols < 1) fail("clahe", "tile grid must be at least 1x1");
    if (!(clip_limit > 0.0 && clip_limit <= 1.0)) fail("clahe", "clip_limit must be in (0,1]");
    if (img.height < tile_rows || img.width < tile_cols)
        fail("clahe", "image smaller than tile grid");

    const int tr = tile_rows, tc = tile_cols;
    // Tile boundaries by even subdivision; tile (i,j) covers rows
    // [ry[i],ry[i+1]) x cols [rx[j],rx[j+1]).
    std::vector<int> ry(tr + 1), rx(tc + 1);
    for (int i = 0; i <= tr; ++i) ry[i] = static_cast<int>(static_cast<long>(img.height) * i / tr);
    for (int j = 0; j <= tc; ++j) rx[j] = static_cast<int>(static_cast<long>(img.width) * j / tc);

    // Per-tile equalization mapping: map[v] = round(255 * cdf(v) / npix).
    std::vector<std::array<double, 256>> maps(static_cast<std::size_t>(tr) * tc);
    std::vector<double> tcy(tr), tcx(tc); // tile centers
    for (int i = 0; i < tr; ++i) tcy[i] = 0.5 * (ry[i] + ry[i + 1] - 1);
    for (int j = 0; j < tc; ++j) tcx[j] = 0.5 * (rx[j] + rx[j + 1] - 1);

    for (int i = 0; i < tr; ++i) {
        for (int j = 0; j < tc; ++j) {
            double hist[256] = {0};
            long npix = 0;
            for (int y = ry[i]; y < ry[i + 1]; ++y)
                for (int x = rx[j]; x < rx[j + 1]; ++x) {
                    hist[img.at(x, y)] += 1.0;
                    ++npix;
                }
            double clip = clip_limit * static_cast<double>(npix);
            double excess = 0.0;
            for (double& h : hist)
                if (h > clip) {
                    excess += h - clip;
                    h = clip;
                }
            double share = excess / 256.0;
            for (double& h : hist) h += share;
            auto& map = maps[static_cast<std::size_t>(i) * tc + j];
            double cdf = 0.0;
            for (int v = 0; v < 256; ++v) {
                cdf += hist[v];
                map[v] = std::round(255.0 * cdf / static_cast<double>(npix));
            }
        }
    }

    GrayImage out = make_image(img.width, img.height);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < img.height; ++y) {
        // Bracketing tile rows for interpolation.
        int i1 = 0;
        while (i1 < tr - 1 && tcy[i1 + 1] < y) ++i1;
        int i0 = i1;
        if (y < tcy[i1] && i1 > 0) i0 = i1 - 1;
        if (y > tcy[i1] && i1 < tr - 1) { i0 = i1; i1 = i1 + 1; }
        double wy = (i0 == i1) ? 0.0 : (y - tcy[i0]) / (tcy[i1] - tcy[i0]);
        wy = std::clamp(wy, 0.0, 1.0);
        for (int x = 0; x < img.width; ++x) {
            int j1 = 0;
            while (j1 < tc - 1 && tcx[j1 + 1] < x) ++j1;
            int j0 = j1;
            if (x < tcx[j1] && j1 > 0) j0 = j1 - 1;
            if (x > tcx[j1] && j1 < tc - 1) { j0 = j1; j1 = j1 + 1; }
            double wx = (j0 == j1) ? 0.0 : (x - tcx[j0]) / (tcx[j1] - tcx[j0]);
            wx = std::clamp(wx, 0.0, 1.0);
            int v = img.at(x, y);
            double m00 = maps[static_cast<std::size_t>(i0) * tc + j0][v];
            double m01 = maps[static_cast<std::size_t>(i0) * tc + j1][v];
            double m10 = maps[static_cast<std::size_t>(i1) * tc + j0][v];
            double m11 = maps[static_cast<std::size_t>(i1) * tc + j1][v];
            double val = (1 - wy) * ((1 - wx) * m00 + wx * m01) + wy * ((1 - wx) * m10 + wx * m11);
            out.at(x, y) = static_cast<std::uint8_t>(clampi(static_cast<int>(std::lround(val)), 0, 255));
        }
    }
    out.anchor = img.anchor;
    return out;
}

// -------------------------------------------------------------------------
// Annotations
// -------------------------------------------------------------------------

std::map<std::string, Annotation> read_annotations(const std::string& path) {
    std::string text = read_text_file(path);
    std::vector<std::string> lines = split(text, '\n');
    if (lines.empty()) fail("annotations", path + ": empty file");
    std::string header = trim(lines[0]);
    NormStyle style;
    if (header == "subject,eye,sensor,index,x1,y1,x2,y2")
        style = NormStyle::CornerBased;
    else if (header == "subject,eye,sensor,index,cx,cy,r")
        style = NormStyle::ScleraBased;
    else
        fail("annotations", path + ": unrecognized header");
    std::map<std::string, Annotation> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::string line = trim(lines[i]);
        if (line.empty()) continue;
        std::string ctx = path + ":" + std::to_string(i + 1);
        std::vector<std::string> f = split(line, ',');
        std::size_t expect = (style == NormStyle::CornerBased) ? 8 : 7;
        if (f.size() != expect) fail("annotations", ctx + ": wrong field count");
        std::string key = trim(f[0]) + ":" + trim(f[1]) + ":" + trim(f[2]) + ":" + trim(f[3]);
        Annotation a;
        a.style = style;
        if (style == NormStyle::CornerBased) {
            a.x1 = parse_double(f[4], ctx);
            a.y1 = parse_double(f[5], ctx);
            a.x2 = parse_double(f[6], ctx);
            a.y2 = parse_double(f[7], ctx);
        } else {
            a.cx = parse_double(f[4], ctx);
            a.cy = parse_double(f[5], ctx);
            a.r = parse_double(f[6], ctx);
        }
        if (!out.emplace(key, a).second) fail("annotations", ctx + ": duplicate key " + key);
    }
    return out;
}

} // namespace pbv
