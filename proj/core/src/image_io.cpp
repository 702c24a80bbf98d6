#include "fpr/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fpr {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error(what); }

ImagePlane load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("load_image: cannot open " + path.string());
    std::string magic;
    in >> magic;
    if (magic != "P5" && magic != "P2") fail("load_image: unsupported PGM magic in " + path.string());

    auto next_token = [&in, &path]() -> long {
        // Skips whitespace and # comments.
        while (true) {
            const int c = in.peek();
            if (c == std::char_traits<char>::eof())
                fail("load_image: truncated PGM header in " + path.string());
            if (c == '#') {
                std::string line;
                std::getline(in, line);
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                in.get();
            } else {
                break;
            }
        }
        long v;
        if (!(in >> v)) fail("load_image: truncated PGM header in " + path.string());
        return v;
    };

    const long width = next_token();
    const long height = next_token();
    const long maxval = next_token();
    if (width <= 0 || height <= 0 || width != height)
        fail("load_image: only square images are supported: " + path.string());
    if (maxval != 255) fail("load_image: only 8-bit PGM supported: " + path.string());

    ImagePlane img = ImagePlane::zeros(static_cast<int>(width));
    if (magic == "P5") {
        in.get();  // single whitespace after maxval
        std::vector<unsigned char> raw(static_cast<size_t>(width) * height);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (in.gcount() != static_cast<std::streamsize>(raw.size()))
            fail("load_image: truncated PGM payload in " + path.string());
        for (size_t i = 0; i < raw.size(); ++i) img.values[i] = raw[i];
    } else {
        for (double& v : img.values) {
            long p;
            if (!(in >> p)) fail("load_image: truncated PGM payload in " + path.string());
            if (p < 0 || p > 255) fail("load_image: PGM sample out of range in " + path.string());
            v = static_cast<double>(p);
        }
    }
    return img;
}

void save_pgm(const ImagePlane& x, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail("save_image: cannot open " + path.string());
    out << "P5\n" << x.side << " " << x.side << "\n255\n";
    std::vector<unsigned char> raw(x.values.size());
    for (size_t i = 0; i < raw.size(); ++i) {
        const double v = std::round(std::clamp(x.values[i], 0.0, 255.0));
        raw[i] = static_cast<unsigned char>(v);
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

struct PngReadCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngReadCloser() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

ImagePlane load_png(const std::filesystem::path& path) {
    PngReadCloser ctx;
    ctx.fp = std::fopen(path.string().c_str(), "rb");
    if (!ctx.fp) fail("load_image: cannot open " + path.string());

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, ctx.fp) != 8 || png_sig_cmp(sig, 0, 8))
        fail("load_image: not a PNG file: " + path.string());

    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) fail("load_image: png_create_read_struct failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) fail("load_image: png_create_info_struct failed");
    if (setjmp(png_jmpbuf(ctx.png))) fail("load_image: PNG decode failure in " + path.string());

    png_init_io(ctx.png, ctx.fp);
    png_set_sig_bytes(ctx.png, 8);
    png_read_info(ctx.png, ctx.info);

    const png_uint_32 width = png_get_image_width(ctx.png, ctx.info);
    const png_uint_32 height = png_get_image_height(ctx.png, ctx.info);
    const int bit_depth = png_get_bit_depth(ctx.png, ctx.info);
    const int color_type = png_get_color_type(ctx.png, ctx.info);

    if (width != height) fail("load_image: only square images are supported: " + path.string());

    // Normalize everything libpng can hand us to 8-bit grayscale.
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (bit_depth == 16) png_set_strip_16(ctx.png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(ctx.png);
    if (color_type == PNG_COLOR_TYPE_RGB || color_type == PNG_COLOR_TYPE_RGB_ALPHA ||
        color_type == PNG_COLOR_TYPE_PALETTE)
        png_set_rgb_to_gray_fixed(ctx.png, 1, -1, -1);
    png_read_update_info(ctx.png, ctx.info);

    if (png_get_channels(ctx.png, ctx.info) != 1)
        fail("load_image: cannot reduce PNG to grayscale: " + path.string());

    ImagePlane img = ImagePlane::zeros(static_cast<int>(width));
    std::vector<unsigned char> row(width);
    for (png_uint_32 r = 0; r < height; ++r) {
        png_read_row(ctx.png, row.data(), nullptr);
        for (png_uint_32 c = 0; c < width; ++c)
            img.values[static_cast<size_t>(r) * width + c] = row[c];
    }
    return img;
}

struct PngWriteCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngWriteCloser() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

void save_png(const ImagePlane& x, const std::filesystem::path& path) {
    PngWriteCloser ctx;
    ctx.fp = std::fopen(path.string().c_str(), "wb");
    if (!ctx.fp) fail("save_image: cannot open " + path.string());
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) fail("save_image: png_create_write_struct failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) fail("save_image: png_create_info_struct failed");
    if (setjmp(png_jmpbuf(ctx.png))) fail("save_image: PNG encode failure for " + path.string());

    png_init_io(ctx.png, ctx.fp);
    png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(x.side),
                 static_cast<png_uint_32>(x.side), 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);

    std::vector<unsigned char> row(static_cast<size_t>(x.side));
    for (int r = 0; r < x.side; ++r) {
        for (int c = 0; c < x.side; ++c)
            row[static_cast<size_t>(c)] =
                static_cast<unsigned char>(std::round(std::clamp(x.at(r, c), 0.0, 255.0)));
        png_write_row(ctx.png, row.data());
    }
    png_write_end(ctx.png, nullptr);
}

}  // namespace

ImagePlane load_image(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) fail("load_image: no such file: " + path.string());
    const std::string ext = path.extension().string();
    if (ext == ".pgm" || ext == ".PGM") return load_pgm(path);
    if (ext == ".png" || ext == ".PNG") return load_png(path);
    fail("load_image: unsupported format (want .pgm or .png): " + path.string());
}

void save_image(const ImagePlane& x, const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".pgm" || ext == ".PGM") return save_pgm(x, path);
    if (ext == ".png" || ext == ".PNG") return save_png(x, path);
    fail("save_image: unsupported format (want .pgm or .png): " + path.string());
}

ImagePlane resize_bilinear(const ImagePlane& x, int new_side) {
    detail::require(new_side > 0, "resize_bilinear: side must be positive");
    if (new_side == x.side) return x;
    ImagePlane out = ImagePlane::zeros(new_side);
    const double scale = static_cast<double>(x.side) / new_side;
    for (int r = 0; r < new_side; ++r) {
        const double fy = std::clamp((r + 0.5) * scale - 0.5, 0.0, static_cast<double>(x.side - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, x.side - 1);
        const double wy = fy - y0;
        for (int c = 0; c < new_side; ++c) {
            const double fx = std::clamp((c + 0.5) * scale - 0.5, 0.0, static_cast<double>(x.side - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, x.side - 1);
            const double wx = fx - x0;
            out.at(r, c) = (1 - wy) * ((1 - wx) * x.at(y0, x0) + wx * x.at(y0, x1)) +
                           wy * ((1 - wx) * x.at(y1, x0) + wx * x.at(y1, x1));
        }
    }
    return out;
}

}  // namespace fpr
