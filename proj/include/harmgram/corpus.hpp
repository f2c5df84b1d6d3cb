#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "harmgram/rational.hpp"

namespace harmgram {

// One notated note. Tied pairs are encoded as a single event with the
// summed duration, so a held note keeps sounding through later onsets.
struct NoteEvent {
  Rat onset;     // quarter notes from movement start, >= 0
  Rat duration;  // quarter notes, > 0
  int pitch = 0; // chromatic pitch, octave-bearing (60 = middle C)
  int part = 0;  // 0 = lowest-written staff

  bool operator==(const NoteEvent&) const = default;
};

enum class Mode : std::uint8_t { major, minor };

const char* mode_name(Mode m);

// Annotated key region [start, end). Pivot segments mark modulation spans
// and may straddle the boundary between two non-pivot segments.
struct KeySegment {
  Rat start;
  Rat end;
  int tonic = 0;  // pitch class 0..11
  Mode mode = Mode::major;
  bool is_pivot = false;

  bool covers(const Rat& onset) const { return start <= onset && onset < end; }
  bool operator==(const KeySegment&) const = default;
};

struct Movement {
  std::string id;
  int part_count = 0;
  std::vector<NoteEvent> notes;  // sorted by (onset, part, pitch)
  std::vector<KeySegment> keys;

  bool operator==(const Movement&) const = default;

  // The non-pivot segment covering `onset`; throws ValidationError if none.
  const KeySegment& key_at(const Rat& onset) const;
  bool in_pivot(const Rat& onset) const;
};

// One unique onset time after full expansion: everything sounding there.
struct Slice {
  Rat onset;
  Rat duration;  // to the next unique onset, or to the last offset
  std::vector<std::pair<int, int>> sounding;  // (part, pitch), sorted

  bool operator==(const Slice&) const = default;
};

// ---------------------------------------------------------------------------
// Parsing / serialization
//
// Note file: TSV with '#' comments, a required "#parts=<n>" header line,
// and rows "onset_num onset_den dur_num dur_den pitch part".
// Key file:  rows "start_num start_den end_num end_den tonic mode pivot".
// ---------------------------------------------------------------------------

Movement parse_movement(std::istream& note_file, std::istream& key_file,
                        const std::string& id);

// Canonical form: tab separators, normalized rationals, notes sorted.
// Any accepted file re-serializes to this form and re-parses identically.
void serialize_movement(const Movement& movement, std::ostream& note_file,
                        std::ostream& key_file);

// Manifest: one "note_path<TAB>key_path" pair per line, '#' comments.
// Relative paths resolve against the manifest's directory.
struct ManifestEntry {
  std::string note_path;
  std::string key_path;
};

std::vector<ManifestEntry> parse_manifest(std::istream& in,
                                          const std::string& base_dir);
std::vector<Movement> load_corpus(const std::string& manifest_path);

// ---------------------------------------------------------------------------
// Full expansion
// ---------------------------------------------------------------------------

// One slice per unique note onset; a note joins every slice whose onset lies
// in [note.onset, note.onset + note.duration). A rest before the next onset
// is absorbed into the preceding slice's duration.
std::vector<Slice> full_expansion(const Movement& movement);

}  // namespace harmgram
