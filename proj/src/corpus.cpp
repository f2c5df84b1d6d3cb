#include "harmgram/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "harmgram/errors.hpp"

namespace harmgram {

const char* mode_name(Mode m) { return m == Mode::major ? "major" : "minor"; }

namespace {

// Splits on any run of spaces/tabs; canonical output uses tabs.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

std::int64_t parse_int(std::string_view text, const std::string& file, int line_no,
                       const char* what) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(file + " line " + std::to_string(line_no) + ": bad " + what +
                     " '" + std::string(text) + "'");
  }
  return value;
}

std::string chomp(std::string line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  return line;
}

}  // namespace

const KeySegment& Movement::key_at(const Rat& onset) const {
  for (const auto& seg : keys) {
    if (!seg.is_pivot && seg.covers(onset)) return seg;
  }
  throw ValidationError("movement " + id + ": onset " + rat_str(onset) +
                        " not covered by any key segment");
}

bool Movement::in_pivot(const Rat& onset) const {
  for (const auto& seg : keys) {
    if (seg.is_pivot && seg.covers(onset)) return true;
  }
  return false;
}

Movement parse_movement(std::istream& note_file, std::istream& key_file,
                        const std::string& id) {
  Movement movement;
  movement.id = id;

  const std::string note_name = id + " notes";
  const std::string key_name = id + " keys";

  bool have_parts = false;
  std::string line;
  int line_no = 0;
  while (std::getline(note_file, line)) {
    ++line_no;
    line = chomp(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("#parts=", 0) == 0) {
        movement.part_count =
            static_cast<int>(parse_int(std::string_view(line).substr(7), note_name,
                                       line_no, "part count"));
        if (movement.part_count < 1) {
          throw ParseError(note_name + " line " + std::to_string(line_no) +
                           ": part count must be >= 1");
        }
        have_parts = true;
      }
      continue;
    }
    if (!have_parts) {
      throw ParseError(note_name + ": missing #parts=<n> header before first note");
    }
    auto fields = split_fields(line);
    if (fields.size() != 6) {
      throw ParseError(note_name + " line " + std::to_string(line_no) +
                       ": expected 6 columns, got " + std::to_string(fields.size()));
    }
    NoteEvent note;
    std::int64_t onset_num = parse_int(fields[0], note_name, line_no, "onset numerator");
    std::int64_t onset_den = parse_int(fields[1], note_name, line_no, "onset denominator");
    std::int64_t dur_num = parse_int(fields[2], note_name, line_no, "duration numerator");
    std::int64_t dur_den = parse_int(fields[3], note_name, line_no, "duration denominator");
    if (onset_den <= 0 || dur_den <= 0) {
      throw ParseError(note_name + " line " + std::to_string(line_no) +
                       ": denominators must be positive");
    }
    note.onset = Rat(onset_num, onset_den);
    note.duration = Rat(dur_num, dur_den);
    note.pitch = static_cast<int>(parse_int(fields[4], note_name, line_no, "pitch"));
    note.part = static_cast<int>(parse_int(fields[5], note_name, line_no, "part"));
    if (note.onset < Rat(0)) {
      throw ParseError(note_name + " line " + std::to_string(line_no) +
                       ": negative onset");
    }
    if (note.duration <= Rat(0)) {
      throw ParseError(note_name + " line " + std::to_string(line_no) +
                       ": duration must be > 0");
    }
    if (note.part < 0 || note.part >= movement.part_count) {
      throw ParseError(note_name + " line " + std::to_string(line_no) + ": part " +
                       std::to_string(note.part) + " outside declared range 0.." +
                       std::to_string(movement.part_count - 1));
    }
    movement.notes.push_back(note);
  }
  if (!have_parts) {
    throw ParseError(note_name + ": missing #parts=<n> header");
  }

  line_no = 0;
  while (std::getline(key_file, line)) {
    ++line_no;
    line = chomp(line);
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_fields(line);
    if (fields.size() != 7) {
      throw ParseError(key_name + " line " + std::to_string(line_no) +
                       ": expected 7 columns, got " + std::to_string(fields.size()));
    }
    KeySegment seg;
    std::int64_t start_num = parse_int(fields[0], key_name, line_no, "start numerator");
    std::int64_t start_den = parse_int(fields[1], key_name, line_no, "start denominator");
    std::int64_t end_num = parse_int(fields[2], key_name, line_no, "end numerator");
    std::int64_t end_den = parse_int(fields[3], key_name, line_no, "end denominator");
    if (start_den <= 0 || end_den <= 0) {
      throw ParseError(key_name + " line " + std::to_string(line_no) +
                       ": denominators must be positive");
    }
    seg.start = Rat(start_num, start_den);
    seg.end = Rat(end_num, end_den);
    seg.tonic = static_cast<int>(parse_int(fields[4], key_name, line_no, "tonic"));
    if (seg.tonic < 0 || seg.tonic > 11) {
      throw ParseError(key_name + " line " + std::to_string(line_no) +
                       ": tonic must be in 0..11");
    }
    if (fields[5] == "major") {
      seg.mode = Mode::major;
    } else if (fields[5] == "minor") {
      seg.mode = Mode::minor;
    } else {
      throw ParseError(key_name + " line " + std::to_string(line_no) + ": mode '" +
                       std::string(fields[5]) + "' is not major/minor");
    }
    std::int64_t pivot = parse_int(fields[6], key_name, line_no, "pivot flag");
    if (pivot != 0 && pivot != 1) {
      throw ParseError(key_name + " line " + std::to_string(line_no) +
                       ": pivot flag must be 0 or 1");
    }
    seg.is_pivot = pivot == 1;
    if (!(seg.start < seg.end)) {
      throw ParseError(key_name + " line " + std::to_string(line_no) +
                       ": segment start must precede end");
    }
    movement.keys.push_back(seg);
  }

  // Canonical note order.
  std::sort(movement.notes.begin(), movement.notes.end(),
            [](const NoteEvent& a, const NoteEvent& b) {
              return std::tie(a.onset, a.part, a.pitch, a.duration) <
                     std::tie(b.onset, b.part, b.pitch, b.duration);
            });
  std::sort(movement.keys.begin(), movement.keys.end(),
            [](const KeySegment& a, const KeySegment& b) {
              return std::tie(a.start, a.end, a.is_pivot) <
                     std::tie(b.start, b.end, b.is_pivot);
            });

  // Non-pivot segments must be pairwise disjoint.
  const KeySegment* prev = nullptr;
  for (const auto& seg : movement.keys) {
    if (seg.is_pivot) continue;
    if (prev != nullptr && seg.start < prev->end) {
      throw ValidationError(key_name + ": non-pivot segments [" + rat_str(prev->start) +
                            "," + rat_str(prev->end) + ") and [" + rat_str(seg.start) +
                            "," + rat_str(seg.end) + ") overlap");
    }
    prev = &seg;
  }

  // Every note onset must fall inside a non-pivot segment.
  for (const auto& note : movement.notes) {
    movement.key_at(note.onset);
  }

  return movement;
}

void serialize_movement(const Movement& movement, std::ostream& note_file,
                        std::ostream& key_file) {
  note_file << "#parts=" << movement.part_count << "\n";
  for (const auto& n : movement.notes) {
    note_file << n.onset.numerator() << '\t' << n.onset.denominator() << '\t'
              << n.duration.numerator() << '\t' << n.duration.denominator() << '\t'
              << n.pitch << '\t' << n.part << "\n";
  }
  for (const auto& k : movement.keys) {
    key_file << k.start.numerator() << '\t' << k.start.denominator() << '\t'
             << k.end.numerator() << '\t' << k.end.denominator() << '\t' << k.tonic
             << '\t' << mode_name(k.mode) << '\t' << (k.is_pivot ? 1 : 0) << "\n";
  }
}

std::vector<ManifestEntry> parse_manifest(std::istream& in, const std::string& base_dir) {
  std::vector<ManifestEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = chomp(line);
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_fields(line);
    if (fields.size() != 2) {
      throw ParseError("manifest line " + std::to_string(line_no) +
                       ": expected 'note_path key_path'");
    }
    auto resolve = [&](std::string_view p) {
      std::filesystem::path path{std::string(p)};
      if (path.is_relative() && !base_dir.empty()) {
        path = std::filesystem::path(base_dir) / path;
      }
      return path.string();
    };
    entries.push_back({resolve(fields[0]), resolve(fields[1])});
  }
  return entries;
}

std::vector<Movement> load_corpus(const std::string& manifest_path) {
  std::ifstream manifest(manifest_path);
  if (!manifest) {
    throw ParseError("cannot open manifest: " + manifest_path);
  }
  std::string base_dir = std::filesystem::path(manifest_path).parent_path().string();
  auto entries = parse_manifest(manifest, base_dir);

  std::vector<Movement> corpus;
  corpus.reserve(entries.size());
  for (const auto& entry : entries) {
    std::ifstream notes(entry.note_path);
    if (!notes) throw ParseError("cannot open note file: " + entry.note_path);
    std::ifstream keys(entry.key_path);
    if (!keys) throw ParseError("cannot open key file: " + entry.key_path);
    corpus.push_back(
        parse_movement(notes, keys, std::filesystem::path(entry.note_path).stem().string()));
  }
  return corpus;
}

std::vector<Slice> full_expansion(const Movement& movement) {
  std::vector<Slice> slices;
  if (movement.notes.empty()) return slices;

  // Unique onsets, in order (notes are sorted by onset first).
  std::vector<Rat> onsets;
  for (const auto& n : movement.notes) {
    if (onsets.empty() || onsets.back() != n.onset) onsets.push_back(n.onset);
  }

  slices.resize(onsets.size());
  Rat last_offset = movement.notes.front().onset;
  for (const auto& n : movement.notes) {
    last_offset = std::max(last_offset, n.onset + n.duration);
  }
  for (std::size_t i = 0; i < onsets.size(); ++i) {
    slices[i].onset = onsets[i];
    slices[i].duration =
        (i + 1 < onsets.size() ? onsets[i + 1] : last_offset) - onsets[i];
  }

  // A note joins every slice whose onset its [onset, onset+duration) covers.
  for (const auto& n : movement.notes) {
    auto first = std::lower_bound(onsets.begin(), onsets.end(), n.onset);
    Rat offset = n.onset + n.duration;
    for (auto it = first; it != onsets.end() && *it < offset; ++it) {
      slices[static_cast<std::size_t>(it - onsets.begin())].sounding.emplace_back(
          n.part, n.pitch);
    }
  }
  for (auto& slice : slices) {
    std::sort(slice.sounding.begin(), slice.sounding.end());
  }
  return slices;
}

}  // namespace harmgram
