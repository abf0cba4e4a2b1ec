#include "iconcode/codegen.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "iconcode/errors.hpp"

namespace iconcode {

namespace {

struct NamedColor {
  std::string_view name;
  std::string_view hex;
};

// Each value is classified as its own name by the default HSV masks.
constexpr NamedColor kPalette[] = {
    {"black", "#000000"}, {"blue", "#0000ff"},    {"cyan", "#00ffff"}, {"green", "#008000"},
    {"lime", "#bfff00"},  {"magenta", "#ff00ff"}, {"red", "#ff0000"},  {"white", "#ffffff"},
};

std::string html_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string sanitize_label(std::string_view label) {
  std::string out;
  out.reserve(label.size());
  for (unsigned char c : label) {
    const auto lower = static_cast<char>(std::tolower(c));
    out += (std::isalnum(c) && c < 0x80) ? lower : '-';
  }
  return out;
}

std::string_view color_hex(std::string_view color) {
  for (const auto& c : kPalette) {
    if (c.name == color) return c.hex;
  }
  throw ValidationError("unknown colour \"" + std::string(color) + "\"");
}

CodeSnippet render_snippet(std::string_view label, std::string_view color) {
  if (label.empty()) throw ValidationError("icon label must not be empty");
  CodeSnippet snip;
  snip.class_name = "icon-" + sanitize_label(label);
  if (color != "none") {
    color_hex(color);  // validates the name
    snip.color_class = std::string(color);
  }
  snip.html = "<i class=\"" + snip.class_name + (snip.color_class.empty() ? "" : " " + snip.color_class) + "\"></i>";
  return snip;
}

std::string render_css(const GlyphManifest& manifest) {
  if (manifest.glyphs.empty()) throw ValidationError("cannot render CSS for an empty glyph manifest");
  const std::string& family = manifest.family;
  std::string css;
  css += "@font-face {\n";
  css += "  font-family: \"" + family + "\";\n";
  css += "  src: url(\"" + family + ".ttf\") format(\"truetype\");\n";
  css += "  font-weight: normal;\n  font-style: normal;\n}\n\n";
  css += "[class^=\"icon-\"], [class*=\" icon-\"] {\n";
  css += "  font-family: \"" + family + "\" !important;\n";
  css += "  font-style: normal;\n  line-height: 1;\n  speak: never;\n}\n\n";
  for (const auto& g : manifest.glyphs) {
    char hex[16];
    std::snprintf(hex, sizeof hex, "%x", static_cast<unsigned>(g.codepoint));
    css += ".icon-" + sanitize_label(g.name) + "::before { content: \"\\" + std::string(hex) + "\"; }\n";
  }
  css += "\n";
  for (const auto& c : kPalette) {
    css += "." + std::string(c.name) + " { color: " + std::string(c.hex) + "; }\n";
  }
  return css;
}

std::string render_gallery(const std::string& title, const std::vector<GalleryItem>& items) {
  std::string html;
  html += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n";
  html += "<title>" + html_escape(title) + "</title>\n";
  html += "<link rel=\"stylesheet\" href=\"icons.css\">\n</head>\n<body>\n";
  html += "<h1>" + html_escape(title) + "</h1>\n<table>\n";
  for (const auto& item : items) {
    html += "<tr><td><img src=\"" + html_escape(item.svg_file) + "\" alt=\"" + html_escape(item.snippet.class_name) +
            "\" width=\"32\" height=\"32\"></td><td>" + item.snippet.html + "</td><td><code>" +
            html_escape(item.snippet.html) + "</code></td></tr>\n";
  }
  html += "</table>\n</body>\n</html>\n";
  return html;
}

}  // namespace iconcode
