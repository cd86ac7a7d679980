#include "ynet/image.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "ynet/errors.hpp"

namespace ynet {

namespace {

// PPM header tokens are separated by whitespace; '#' starts a comment that
// runs to end of line.
std::string next_token(std::istream& is) {
    std::string tok;
    int c;
    while ((c = is.get()) != EOF) {
        if (c == '#') {
            while ((c = is.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    if (tok.empty()) throw IoError("ppm: truncated header");
    return tok;
}

std::size_t parse_dim(const std::string& tok, const char* what) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(tok, &pos);
    } catch (const std::exception&) {
        throw IoError(std::string("ppm: bad ") + what + " '" + tok + "'");
    }
    if (pos != tok.size() || v == 0)
        throw IoError(std::string("ppm: bad ") + what + " '" + tok + "'");
    return static_cast<std::size_t>(v);
}

}  // namespace

Tensor read_ppm(std::istream& is) {
    std::string magic(2, '\0');
    if (!is.read(magic.data(), 2) || magic != "P6")
        throw IoError("ppm: bad magic, expected P6");
    const std::size_t w = parse_dim(next_token(is), "width");
    const std::size_t h = parse_dim(next_token(is), "height");
    const std::string maxval = next_token(is);
    if (maxval != "255")
        throw IoError("ppm: unsupported maxval " + maxval + ", only 255 is handled");
    // the single whitespace byte after maxval was consumed by the tokenizer

    const std::size_t count = h * w * 3;
    std::vector<unsigned char> raw(count);
    if (!is.read(reinterpret_cast<char*>(raw.data()),
                 static_cast<std::streamsize>(count)))
        throw IoError("ppm: truncated pixel data, expected " + std::to_string(count) +
                      " bytes");
    Tensor img({h, w, 3});
    for (std::size_t i = 0; i < count; ++i)
        img.data()[i] = static_cast<double>(raw[i]);
    return img;
}

Tensor read_ppm(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("ppm: cannot open " + path.string());
    try {
        return read_ppm(is);
    } catch (const IoError& e) {
        throw IoError(std::string(e.what()) + " (" + path.string() + ")");
    }
}

void write_ppm(std::ostream& os, const Tensor& img) {
    if (img.rank() != 3 || img.dim(2) != 3)
        throw IoError("ppm: [H,W,3] image required, got " + shape_str(img.shape()));
    const std::size_t h = img.dim(0), w = img.dim(1);
    os << "P6\n" << w << " " << h << "\n255\n";
    std::vector<unsigned char> raw(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
        const double v = std::round(img.data()[i]);
        raw[i] = static_cast<unsigned char>(v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v));
    }
    if (!os.write(reinterpret_cast<const char*>(raw.data()),
                  static_cast<std::streamsize>(raw.size())))
        throw IoError("ppm: write failed");
}

void write_ppm(const std::filesystem::path& path, const Tensor& img) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("ppm: cannot open for write " + path.string());
    write_ppm(os, img);
    if (!os.flush()) throw IoError("ppm: write failed " + path.string());
}

Tensor resize_bilinear(const Tensor& img, std::size_t out_h, std::size_t out_w) {
    if (img.rank() != 3) throw Error("resize: [H,W,C] image required, got " +
                                     shape_str(img.shape()));
    if (out_h == 0 || out_w == 0) throw Error("resize: zero output dimension");
    const std::size_t H = img.dim(0), W = img.dim(1), C = img.dim(2);
    if (H == out_h && W == out_w) return img;

    Tensor out({out_h, out_w, C});
    const double sy = out_h > 1 ? static_cast<double>(H - 1) / static_cast<double>(out_h - 1) : 0.0;
    const double sx = out_w > 1 ? static_cast<double>(W - 1) / static_cast<double>(out_w - 1) : 0.0;
    for (std::size_t oh = 0; oh < out_h; ++oh) {
        const double fy = static_cast<double>(oh) * sy;
        const std::size_t y0 = static_cast<std::size_t>(fy);
        const std::size_t y1 = std::min(y0 + 1, H - 1);
        const double ty = fy - static_cast<double>(y0);
        for (std::size_t ow = 0; ow < out_w; ++ow) {
            const double fx = static_cast<double>(ow) * sx;
            const std::size_t x0 = static_cast<std::size_t>(fx);
            const std::size_t x1 = std::min(x0 + 1, W - 1);
            const double tx = fx - static_cast<double>(x0);
            const double* p00 = img.data() + (y0 * W + x0) * C;
            const double* p01 = img.data() + (y0 * W + x1) * C;
            const double* p10 = img.data() + (y1 * W + x0) * C;
            const double* p11 = img.data() + (y1 * W + x1) * C;
            double* po = out.data() + (oh * out_w + ow) * C;
            for (std::size_t c = 0; c < C; ++c) {
                const double top = p00[c] + tx * (p01[c] - p00[c]);
                const double bot = p10[c] + tx * (p11[c] - p10[c]);
                po[c] = top + ty * (bot - top);
            }
        }
    }
    return out;
}

}  // namespace ynet
