//! Nearest circumplex word for points around the valence/arousal plane.
//!
//!     cargo run --example circumplex_words

use emotrace::decoder::{nearest_emotion_word, Emotion};

fn main() {
    for e in Emotion::OCTANTS {
        let deg = e.angle_degrees().expect("octant words have an angle");
        let a = deg.to_radians();
        let (v, ar) = (0.8 * a.cos(), 0.8 * a.sin());
        println!("{deg:>5.0}°  ({v:>6.3}, {ar:>6.3})  {}", nearest_emotion_word(v, ar));
    }
    for (v, a) in [(0.05, -0.05), (0.3, 0.31), (-0.7, 0.7), (0.2, -0.9)] {
        println!("({v:>5}, {a:>5})  {}", nearest_emotion_word(v, a));
    }
}
