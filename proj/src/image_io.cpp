#include "alticon/image_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "alticon/error.hpp"
#include "alticon/util.hpp"

namespace alticon {

Image decode_image(std::span<const std::uint8_t> bytes) {
    const cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1,
                      const_cast<std::uint8_t*>(bytes.data()));
    cv::Mat decoded = cv::imdecode(raw, cv::IMREAD_UNCHANGED);
    if (decoded.empty()) {
        throw Error(Error::Kind::Parse, "cannot decode image data");
    }

    Image out;
    out.width = decoded.cols;
    out.height = decoded.rows;
    out.rgba.resize(static_cast<std::size_t>(out.width) * out.height * 4);
    const int channels = decoded.channels();
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            std::uint8_t* dst = out.pixel(x, y);
            if (channels == 1) {
                const std::uint8_t v = decoded.at<std::uint8_t>(y, x);
                dst[0] = dst[1] = dst[2] = v;
                dst[3] = 255;
            } else if (channels == 3) {
                const cv::Vec3b px = decoded.at<cv::Vec3b>(y, x);  // BGR
                dst[0] = px[2];
                dst[1] = px[1];
                dst[2] = px[0];
                dst[3] = 255;
            } else {
                const cv::Vec4b px = decoded.at<cv::Vec4b>(y, x);  // BGRA
                dst[0] = px[2];
                dst[1] = px[1];
                dst[2] = px[0];
                dst[3] = px[3];
            }
        }
    }
    return out;
}

Image load_image(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    return decode_image(
        std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

std::vector<std::uint8_t> encode_png(const Image& image) {
    if (image.empty()) {
        throw Error(Error::Kind::Validation, "encode_png: empty image");
    }
    cv::Mat bgra(image.height, image.width, CV_8UC4);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const std::uint8_t* src = image.pixel(x, y);
            bgra.at<cv::Vec4b>(y, x) = cv::Vec4b(src[2], src[1], src[0], src[3]);
        }
    }
    std::vector<std::uint8_t> out;
    if (!cv::imencode(".png", bgra, out)) {
        throw Error(Error::Kind::Io, "PNG encoding failed");
    }
    return out;
}

}  // namespace alticon
