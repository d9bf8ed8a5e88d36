#include "pathrobust/codec.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <string>

// clang-format off
#include <jpeglib.h>
#include <png.h>
// clang-format on

#include "pathrobust/error.hpp"

namespace pathrobust {

namespace {

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

void jpeg_silent(j_common_ptr, int) {}

// Only trivially destructible locals live between setjmp and longjmp in the
// two helpers below.
bool jpeg_encode_raw(const RasterImage& image, int quality, unsigned char** out,
                     unsigned long* out_size, char* message) {
  jpeg_compress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  err.base.emit_message = jpeg_silent;
  if (setjmp(err.jump)) {
    std::snprintf(message, JMSG_LENGTH_MAX, "%s", err.message);
    jpeg_destroy_compress(&cinfo);
    return false;
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, out, out_size);
  cinfo.image_width = static_cast<JDIMENSION>(image.width());
  cinfo.image_height = static_cast<JDIMENSION>(image.height());
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  cinfo.dct_method = JDCT_ISLOW;
  cinfo.optimize_coding = FALSE;
  jpeg_start_compress(&cinfo, TRUE);
  const auto pixels = image.pixels();
  const std::size_t stride = static_cast<std::size_t>(image.width()) * 3;
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPLE*>(pixels.data() + cinfo.next_scanline * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  return true;
}

bool jpeg_decode_raw(const unsigned char* data, std::size_t size, std::uint8_t* target,
                     std::size_t target_size, int* width, int* height, char* message) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  err.base.emit_message = jpeg_silent;
  if (setjmp(err.jump)) {
    std::snprintf(message, JMSG_LENGTH_MAX, "%s", err.message);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, data, static_cast<unsigned long>(size));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  cinfo.dct_method = JDCT_ISLOW;
  cinfo.do_fancy_upsampling = TRUE;
  jpeg_start_decompress(&cinfo);
  *width = static_cast<int>(cinfo.output_width);
  *height = static_cast<int>(cinfo.output_height);
  const std::size_t stride = static_cast<std::size_t>(cinfo.output_width) * 3;
  if (cinfo.output_components != 3 || stride * cinfo.output_height > target_size) {
    std::snprintf(message, JMSG_LENGTH_MAX, "unexpected decoded geometry");
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = target + cinfo.output_scanline * stride;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

int jpeg_header_size(const unsigned char* data, std::size_t size, int* width, int* height,
                     char* message) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  err.base.emit_message = jpeg_silent;
  if (setjmp(err.jump)) {
    std::snprintf(message, JMSG_LENGTH_MAX, "%s", err.message);
    jpeg_destroy_decompress(&cinfo);
    return 0;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, data, static_cast<unsigned long>(size));
  jpeg_read_header(&cinfo, TRUE);
  *width = static_cast<int>(cinfo.image_width);
  *height = static_cast<int>(cinfo.image_height);
  jpeg_destroy_decompress(&cinfo);
  return 1;
}

struct PngImage {
  png_image image{};
  PngImage() { image.version = PNG_IMAGE_VERSION; }
  ~PngImage() { png_image_free(&image); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

std::vector<std::uint8_t> png_decode(std::span<const std::uint8_t> bytes, png_uint_32 format,
                                     int* width, int* height) {
  PngImage png;
  if (!png_image_begin_read_from_memory(&png.image, bytes.data(), bytes.size())) {
    throw BackendError(std::string("png decode: ") + png.image.message);
  }
  png.image.format = format;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(png.image));
  if (!png_image_finish_read(&png.image, nullptr, pixels.data(), 0, nullptr)) {
    throw BackendError(std::string("png decode: ") + png.image.message);
  }
  *width = static_cast<int>(png.image.width);
  *height = static_cast<int>(png.image.height);
  return pixels;
}

}  // namespace

std::vector<std::uint8_t> encode_jpeg(const RasterImage& image, int quality) {
  validate_image(image);
  if (quality < 1 || quality > 100) {
    throw ValidationError("jpeg quality must be in [1, 100], got " + std::to_string(quality));
  }
  unsigned char* buffer = nullptr;
  unsigned long size = 0;
  char message[JMSG_LENGTH_MAX] = {};
  const bool ok = jpeg_encode_raw(image, quality, &buffer, &size, message);
  std::vector<std::uint8_t> out;
  if (ok) out.assign(buffer, buffer + size);
  std::free(buffer);
  if (!ok) throw BackendError(std::string("jpeg encode: ") + message);
  return out;
}

RasterImage decode_jpeg(std::span<const std::uint8_t> bytes) {
  char message[JMSG_LENGTH_MAX] = {};
  int width = 0;
  int height = 0;
  if (!jpeg_header_size(bytes.data(), bytes.size(), &width, &height, message)) {
    throw BackendError(std::string("jpeg decode: ") + message);
  }
  if (width <= 0 || height <= 0) throw BackendError("jpeg decode: empty image");
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height * 3);
  if (!jpeg_decode_raw(bytes.data(), bytes.size(), pixels.data(), pixels.size(), &width, &height,
                       message)) {
    throw BackendError(std::string("jpeg decode: ") + message);
  }
  return RasterImage(width, height, std::move(pixels));
}

std::vector<std::uint8_t> encode_png(const RasterImage& image) {
  validate_image(image);
  PngImage png;
  png.image.width = static_cast<png_uint_32>(image.width());
  png.image.height = static_cast<png_uint_32>(image.height());
  png.image.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png.image, nullptr, &size, 0, image.pixels().data(), 0,
                                 nullptr)) {
    throw BackendError(std::string("png encode: ") + png.image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&png.image, out.data(), &size, 0, image.pixels().data(), 0,
                                 nullptr)) {
    throw BackendError(std::string("png encode: ") + png.image.message);
  }
  out.resize(size);
  return out;
}

RasterImage decode_png(std::span<const std::uint8_t> bytes) {
  int width = 0;
  int height = 0;
  auto pixels = png_decode(bytes, PNG_FORMAT_RGB, &width, &height);
  return RasterImage(width, height, std::move(pixels));
}

OverlayAsset decode_png_rgba(std::span<const std::uint8_t> bytes) {
  OverlayAsset asset;
  asset.rgba = png_decode(bytes, PNG_FORMAT_RGBA, &asset.width, &asset.height);
  return asset;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

RasterImage read_png(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_png(bytes);
  } catch (const BackendError& e) {
    throw BackendError(path.string() + ": " + e.what());
  }
}

void write_png(const std::filesystem::path& path, const RasterImage& image) {
  write_file(path, encode_png(image));
}

}  // namespace pathrobust
