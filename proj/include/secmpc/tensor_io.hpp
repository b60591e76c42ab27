#pragma once

#include <map>
#include <span>
#include <string>

#include "secmpc/tensor.hpp"

namespace secmpc {

// Tensor file format: magic "SFT1", version byte, rank byte, little-endian
// 64-bit dims, row-major 64-bit float payload.
void save_tensor(const std::string& path, const DoubleTensor& t);
DoubleTensor load_tensor(const std::string& path);

std::vector<u8> tensor_to_bytes(const DoubleTensor& t);
DoubleTensor tensor_from_bytes(std::span<const u8> bytes);

// Weights manifest: UTF-8 text, one "name = relative/path" per line.
// Blank lines and lines starting with '#' are skipped.
std::map<std::string, DoubleTensor> load_weights(const std::string& manifest_path);
void save_weights(const std::string& manifest_path,
                  const std::map<std::string, DoubleTensor>& tensors);

} // namespace secmpc
