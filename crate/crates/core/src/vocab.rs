//! Fixed color, texture and spatial vocabularies (eleven concepts each).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Cardinality shared by the three signal vocabularies.
pub const VOCAB_SIZE: usize = 11;

macro_rules! vocabulary {
    (
        $(#[$meta:meta])*
        $name:ident, $label:literal {
            $($variant:ident => ($text:literal, $code:literal)),+ $(,)?
        }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            /// Members in vocabulary index order.
            pub const ALL: [$name; VOCAB_SIZE] = [$($name::$variant),+];

            /// Zero-based position in the vocabulary.
            pub fn index(self) -> usize {
                self as usize
            }

            pub fn name(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }

            /// Short code used in the original notation.
            pub fn code(self) -> &'static str {
                match self {
                    $($name::$variant => $code),+
                }
            }

            pub fn from_name(name: &str) -> Option<Self> {
                match name {
                    $($text => Some($name::$variant),)+
                    _ => None,
                }
            }

            pub const LABEL: &'static str = $label;
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                $name::from_name(s).ok_or_else(|| format!("unknown {} concept `{}`", $label, s))
            }
        }
    };
}

vocabulary! {
    /// Color concepts `c_1..c_11`.
    Color, "color" {
        Cyan => ("cyan", "C"),
        White => ("white", "W"),
        Green => ("green", "Gn"),
        Grey => ("grey", "G"),
        Yellow => ("yellow", "Y"),
        Black => ("black", "B"),
        Orange => ("orange", "O"),
        Skin => ("skin", "S"),
        Red => ("red", "R"),
        Blue => ("blue", "Bl"),
        Purple => ("purple", "P"),
    }
}

vocabulary! {
    /// Texture concepts `t_1..t_11`.
    Texture, "texture" {
        Bumpy => ("bumpy", "B"),
        Cracked => ("cracked", "C"),
        Disordered => ("disordered", "D"),
        Interlaced => ("interlaced", "I"),
        Lined => ("lined", "L"),
        Marbled => ("marbled", "M"),
        Netlike => ("netlike", "N"),
        Smeared => ("smeared", "S"),
        Spotted => ("spotted", "Sp"),
        Uniform => ("uniform", "U"),
        Whirly => ("whirly", "W"),
    }
}

vocabulary! {
    /// Spatial relations `s_1..s_11`: topological, directional, metric.
    Spatial, "spatial" {
        Covers => ("covers", "C"),
        CoveredBy => ("covered_by", "C_B"),
        PartOf => ("part_of", "P"),
        Touches => ("touches", "T"),
        Disconnected => ("disconnected", "D"),
        Right => ("right", "R"),
        Left => ("left", "L"),
        Above => ("above", "A"),
        Below => ("below", "B"),
        Near => ("near", "N"),
        Far => ("far", "F"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vocabulary_order_is_frozen() {
        let colors: Vec<_> = Color::ALL.iter().map(|c| c.name()).collect();
        assert_eq!(
            colors,
            ["cyan", "white", "green", "grey", "yellow", "black", "orange", "skin", "red", "blue", "purple"]
        );
        let textures: Vec<_> = Texture::ALL.iter().map(|t| t.name()).collect();
        assert_eq!(
            textures,
            [
                "bumpy", "cracked", "disordered", "interlaced", "lined", "marbled", "netlike", "smeared",
                "spotted", "uniform", "whirly"
            ]
        );
        let spatial: Vec<_> = Spatial::ALL.iter().map(|s| s.name()).collect();
        assert_eq!(
            spatial,
            [
                "covers", "covered_by", "part_of", "touches", "disconnected", "right", "left", "above", "below",
                "near", "far"
            ]
        );
    }

    #[test]
    fn one_based_positions() {
        assert_eq!(Color::Red.index() + 1, 9);
        assert_eq!(Spatial::Near.index() + 1, 10);
        assert_eq!(Spatial::Far.index() + 1, 11);
        assert_eq!(Texture::Whirly.index() + 1, 11);
    }

    #[test]
    fn names_round_trip() {
        for c in Color::ALL {
            assert_eq!(c.name().parse::<Color>().unwrap(), c);
        }
        for s in Spatial::ALL {
            assert_eq!(s.name().parse::<Spatial>().unwrap(), s);
        }
        assert!("mauve".parse::<Color>().is_err());
        assert_eq!(Spatial::CoveredBy.code(), "C_B");
    }
}
