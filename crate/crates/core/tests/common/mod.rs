//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vis_enrich::lattice::SemanticLattice;
use vis_enrich::vis::{serialize_vis, VisRecord};
use vis_enrich::vocab::{Color, Spatial, Texture};

pub mod oracle;

/// Leaf concepts grouped by parent, with the colors they are photographed in.
const GROUPS: &[&[(&str, &[Color])]] = &[
    &[
        ("rose", &[Color::Red, Color::White]),
        ("tulip", &[Color::Yellow, Color::Red, Color::Orange]),
        ("daisy", &[Color::White, Color::Yellow]),
        ("orchid", &[Color::Purple, Color::White]),
    ],
    &[
        ("cathedral", &[Color::Grey, Color::White]),
        ("tower", &[Color::Grey, Color::Black]),
        ("house", &[Color::White, Color::Orange]),
        ("church", &[Color::White, Color::Grey]),
    ],
    &[
        ("sea", &[Color::Blue, Color::Cyan]),
        ("lake", &[Color::Blue, Color::Green]),
        ("river", &[Color::Green, Color::Blue]),
    ],
    &[
        ("mountain", &[Color::Grey, Color::White]),
        ("sand", &[Color::Yellow, Color::Orange]),
        ("ground", &[Color::Orange, Color::Black]),
    ],
];

const TEXTURES: &[Texture] = &[Texture::Uniform, Texture::Spotted, Texture::Lined, Texture::Whirly, Texture::Bumpy];

const BACKGROUNDS: &[(&str, Color)] = &[
    ("sky", Color::Blue),
    ("wall", Color::Grey),
    ("foliage", Color::Green),
    ("cloud", Color::White),
];

/// Color-plus-object topic queries: `(id, text, concept, color)`.
pub const QUERIES: &[(&str, &str, &str, Color)] = &[
    ("q01", "Red Roses", "rose", Color::Red),
    ("q02", "Yellow Tulips", "tulip", Color::Yellow),
    ("q03", "White Daisies", "daisy", Color::White),
    ("q04", "Purple Orchids", "orchid", Color::Purple),
    ("q05", "Grey Cathedrals", "cathedral", Color::Grey),
    ("q06", "Grey Towers", "tower", Color::Grey),
    ("q07", "White Churches", "church", Color::White),
    ("q08", "Blue Lakes", "lake", Color::Blue),
    ("q09", "Green Rivers", "river", Color::Green),
    ("q10", "Grey Mountains", "mountain", Color::Grey),
];

#[derive(Debug, Clone)]
pub struct DocTruth {
    pub concept: String,
    pub observed: String,
    pub colors: Vec<Color>,
    pub corrupted: bool,
}

#[derive(Debug, Clone)]
pub struct CorruptedCorpus {
    pub truth: BTreeMap<String, DocTruth>,
    pub queries: String,
    pub qrels: String,
}

fn siblings(concept: &str) -> Vec<&'static str> {
    GROUPS
        .iter()
        .find(|g| g.iter().any(|(c, _)| *c == concept))
        .map(|g| g.iter().map(|(c, _)| *c).filter(|c| *c != concept).collect())
        .unwrap_or_default()
}

fn plural(concept: &str) -> String {
    if let Some(stem) = concept.strip_suffix('y') {
        format!("{stem}ies")
    } else if concept.ends_with("ch") {
        format!("{concept}es")
    } else {
        format!("{concept}s")
    }
}

const OPENERS: &[&str] = &[
    "Notes from a weekend trip with friends and family.",
    "Our travel diary continues with another set of photographs.",
    "This page collects pictures taken during the spring holidays.",
    "A short report from the photo club outing.",
];

/// Mentions of things that are not in the photo.
const ASIDES: &[&str] = &[
    "Later we walked on towards the {c}.",
    "The guide told us about the {color} {p} of the region.",
    "Next week we hope to see the {c} as well.",
    "Yesterday it was too cold to visit the {p}.",
];

const CLOSERS: &[&str] = &[
    "All pictures were taken with a small camera and are free to reuse.",
    "Leave a comment below if you know the place.",
    "More albums are listed on the archive page.",
];

/// Writes a 50-document corpus to `dir`: each page shows one photo whose
/// main object has a known concept. One document in five has its visual
/// label swapped for a sibling concept with low recognition probability,
/// while the page text still names the true concept.
pub fn write_corrupted_corpus(dir: &Path, seed: u64) -> CorruptedCorpus {
    const DOCS: usize = 50;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let leaves: Vec<(&str, &[Color])> = GROUPS.iter().flat_map(|g| g.iter().copied()).collect();
    let mut order: Vec<usize> = (0..DOCS).collect();
    order.shuffle(&mut rng);
    let corrupted: Vec<usize> = order[..DOCS / 5].to_vec();
    let mut truth = BTreeMap::new();

    for i in 0..DOCS {
        let doc = format!("d{i:02}");
        let (concept, palette) = leaves[i % leaves.len()];
        let is_corrupted = corrupted.contains(&i);
        let observed = if is_corrupted {
            *siblings(concept).choose(&mut rng).expect("every leaf has siblings")
        } else {
            concept
        };
        let r = if is_corrupted {
            rng.gen_range(0.30..0.60)
        } else {
            rng.gen_range(0.70..0.95)
        };
        let main_color = *palette.choose(&mut rng).unwrap();
        let mut main = VisRecord::new("vo1", observed, round2(r))
            .color(main_color, round2(rng.gen_range(0.50..0.80)))
            .texture(*TEXTURES.choose(&mut rng).unwrap(), round2(rng.gen_range(0.60..1.00)));
        let mut colors = vec![main_color];
        if rng.gen_bool(0.4) {
            let second = *Color::ALL.choose(&mut rng).unwrap();
            if second != main_color {
                main = main.color(second, round2(rng.gen_range(0.05..0.20)));
                colors.push(second);
            }
        }
        let mut records = vec![main];
        let background = rng.gen_bool(0.6).then(|| *BACKGROUNDS.choose(&mut rng).unwrap());
        if let Some((bg, bg_color)) = background {
            let rel = *[Spatial::Above, Spatial::Below, Spatial::Near].choose(&mut rng).unwrap();
            records[0] = records[0].clone().link(rel, "vo2");
            records.push(
                VisRecord::new("vo2", bg, round2(rng.gen_range(0.70..0.95)))
                    .color(bg_color, round2(rng.gen_range(0.40..0.90)))
                    .texture(Texture::Uniform, 1.0),
            );
        }
        std::fs::write(dir.join(format!("{doc}.vis")), serialize_vis(&records).unwrap()).unwrap();

        let color_word = main_color.name();
        // Corrupted photos always come with a caption naming what they show;
        // other pages name it nine times in ten.
        let names_concept = is_corrupted || rng.gen_bool(0.9);
        let alt = if is_corrupted || (names_concept && rng.gen_bool(0.6)) {
            if rng.gen_bool(0.5) {
                format!("{color_word} {concept}")
            } else {
                format!("a {concept} in the afternoon light")
            }
        } else if rng.gen_bool(0.5) {
            String::from("holiday picture")
        } else {
            String::new()
        };
        let src = if names_concept && rng.gen_bool(0.5) {
            format!("photos/{concept}_{:04}.jpg", rng.gen_range(0..10_000))
        } else {
            format!("photos/IMG_{:04}.jpg", rng.gen_range(0..10_000))
        };
        let mut before = String::from(*OPENERS.choose(&mut rng).unwrap());
        if names_concept {
            match rng.gen_range(0..3) {
                0 => write!(before, " We stopped for a while to look at the {}.", plural(concept)).unwrap(),
                1 => write!(before, " The {color_word} {concept} caught our eye near the path.").unwrap(),
                _ => write!(before, " Here is the {concept} we talked about.").unwrap(),
            }
        } else {
            before.push_str(" The weather was kind to us all day.");
        }
        for _ in 0..rng.gen_range(0..=2) {
            let (other, other_palette) = *leaves.choose(&mut rng).unwrap();
            if other != concept {
                let template = *ASIDES.choose(&mut rng).unwrap();
                let aside = template
                    .replace("{c}", other)
                    .replace("{p}", &plural(other))
                    .replace("{color}", other_palette[0].name());
                write!(before, " {aside}").unwrap();
            }
        }
        if let Some((bg, _)) = background {
            if rng.gen_bool(0.5) {
                write!(before, " The {bg} was lovely that day.").unwrap();
            }
        }
        let after = *CLOSERS.choose(&mut rng).unwrap();
        let page = format!(
            "<html><head><title>Album {doc}</title></head><body>\n<h1>Album</h1>\n<p>{before}</p>\n\
             <figure><img src=\"{src}\" alt=\"{alt}\"></figure>\n<p>{after}</p>\n</body></html>\n"
        );
        std::fs::write(dir.join(format!("{doc}.html")), page).unwrap();
        truth.insert(
            doc,
            DocTruth {
                concept: concept.to_owned(),
                observed: observed.to_owned(),
                colors,
                corrupted: is_corrupted,
            },
        );
    }

    let mut queries = String::new();
    let mut qrels = String::new();
    for (id, text, concept, color) in QUERIES {
        writeln!(queries, "{id}\t{text}").unwrap();
        for (doc, t) in &truth {
            if t.concept == *concept {
                let grade = if t.colors.contains(color) { 2 } else { 1 };
                writeln!(qrels, "{id}\t{doc}\t{grade}").unwrap();
            }
        }
    }
    CorruptedCorpus { truth, queries, qrels }
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// The fragment used by several lattice examples.
pub fn small_lattice() -> SemanticLattice {
    SemanticLattice::load_taxonomy("vegetation\t\t\nflower\tvegetation\t\nfoliage\tvegetation\t\nrose\tflower\t\ntree\tvegetation\t\n")
        .unwrap()
}
