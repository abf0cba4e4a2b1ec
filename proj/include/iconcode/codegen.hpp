#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "iconcode/tracer.hpp"

namespace iconcode {

struct CodeSnippet {
  std::string html;
  std::string class_name;  // "icon-<sanitized label>"
  std::string color_class;  // empty when the colour is "none"
};

// Lowercase; every character outside [a-z0-9] becomes '-'.
std::string sanitize_label(std::string_view label);

// Throws ValidationError on an empty label or an unknown colour name.
CodeSnippet render_snippet(std::string_view label, std::string_view color);

// Canonical CSS colour for each detectable colour name, e.g. "#0000ff" for blue.
std::string_view color_hex(std::string_view color);

// @font-face block, one ::before rule per glyph and the colour classes.
// Throws ValidationError on an empty manifest.
std::string render_css(const GlyphManifest& manifest);

struct GalleryItem {
  CodeSnippet snippet;
  std::string svg_file;  // relative path of the glyph preview
};

std::string render_gallery(const std::string& title, const std::vector<GalleryItem>& items);

}  // namespace iconcode
