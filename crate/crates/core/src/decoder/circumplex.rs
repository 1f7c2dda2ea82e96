use std::fmt;

/// Points closer than this to the origin have no reliable angle.
pub const NEUTRAL_RADIUS: f64 = 0.1;

/// Eight octants of the valence/arousal circle, counterclockwise from the
/// positive valence axis, plus a neutral center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Emotion {
    Pleased,
    Excited,
    Aroused,
    Distressed,
    Miserable,
    Depressed,
    Sleepy,
    Content,
    Neutral,
}

impl Emotion {
    pub const OCTANTS: [Emotion; 8] = [
        Emotion::Pleased,
        Emotion::Excited,
        Emotion::Aroused,
        Emotion::Distressed,
        Emotion::Miserable,
        Emotion::Depressed,
        Emotion::Sleepy,
        Emotion::Content,
    ];

    /// Canonical angle in degrees; `None` for neutral.
    pub fn angle_degrees(self) -> Option<f64> {
        Self::OCTANTS
            .iter()
            .position(|&e| e == self)
            .map(|i| i as f64 * 45.0)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Emotion::Pleased => "pleased",
            Emotion::Excited => "excited",
            Emotion::Aroused => "aroused",
            Emotion::Distressed => "distressed",
            Emotion::Miserable => "miserable",
            Emotion::Depressed => "depressed",
            Emotion::Sleepy => "sleepy",
            Emotion::Content => "content",
            Emotion::Neutral => "neutral",
        }
    }

    pub fn from_word(word: &str) -> Option<Emotion> {
        Self::OCTANTS
            .into_iter()
            .chain([Emotion::Neutral])
            .find(|e| e.as_str() == word)
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Word whose canonical angle is nearest to `atan2(arousal, valence)`;
/// exact midpoints go to the counterclockwise neighbour.
pub fn nearest_emotion_word(valence: f64, arousal: f64) -> Emotion {
    if valence.hypot(arousal) < NEUTRAL_RADIUS || !(valence.is_finite() && arousal.is_finite()) {
        return Emotion::Neutral;
    }
    let degrees = arousal.atan2(valence).to_degrees().rem_euclid(360.0);
    let octant = ((degrees + 22.5) / 45.0).floor() as usize % 8;
    Emotion::OCTANTS[octant]
}
