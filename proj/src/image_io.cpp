// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#include "cctransfer/image_io.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace cct {

Image8 load_rgb8(const std::filesystem::path& path) {
    cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
    if (bgr.empty())
        throw UnreadableImage("cannot read image: " + path.string());
    cv::Mat rgb;
    cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
    Image8 out(rgb.cols, rgb.rows, 3);
    for (int y = 0; y < rgb.rows; ++y) {
        const std::uint8_t* row = rgb.ptr<std::uint8_t>(y);
        std::copy(row, row + static_cast<std::size_t>(rgb.cols) * 3,
                  out.pixels.begin() + static_cast<std::size_t>(y) * rgb.cols * 3);
    }
    return out;
}

Image8 load_gray8(const std::filesystem::path& path) {
    cv::Mat gray = cv::imread(path.string(), cv::IMREAD_GRAYSCALE);
    if (gray.empty())
        throw UnreadableImage("cannot read image: " + path.string());
    Image8 out(gray.cols, gray.rows, 1);
    for (int y = 0; y < gray.rows; ++y) {
        const std::uint8_t* row = gray.ptr<std::uint8_t>(y);
        std::copy(row, row + gray.cols,
                  out.pixels.begin() + static_cast<std::size_t>(y) * gray.cols);
    }
    return out;
}

void save_png(const std::filesystem::path& path, const Image8& img) {
    cv::Mat mat;
    if (img.channels == 3) {
        cv::Mat rgb(img.height, img.width, CV_8UC3,
                    const_cast<std::uint8_t*>(img.pixels.data()));
        cv::cvtColor(rgb, mat, cv::COLOR_RGB2BGR);
    } else if (img.channels == 1) {
        mat = cv::Mat(img.height, img.width, CV_8UC1,
                      const_cast<std::uint8_t*>(img.pixels.data()))
                  .clone();
    } else {
        throw Error("save_png: unsupported channel count " +
                    std::to_string(img.channels));
    }
    if (!cv::imwrite(path.string(), mat))
        throw Error("save_png: failed to write " + path.string());
}

} // namespace cct
