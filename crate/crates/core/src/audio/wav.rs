use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use crate::error::{Error, Result};

use super::{resample, AudioBuffer, CANONICAL_RATE};

/// Decodes a PCM WAV file (16/24-bit integer or 32-bit float, mono or
/// stereo) into a mono buffer at the file's own sample rate.
///
/// Stereo is downmixed by averaging channels; integer formats are scaled
/// by `1 / 2^(bits-1)`.
pub fn load_wav(path: impl AsRef<Path>) -> Result<AudioBuffer> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = WavReader::new(std::io::BufReader::new(file)).map_err(|e| match e {
        hound::Error::IoError(io) => Error::io(path, io),
        hound::Error::Unsupported => Error::UnsupportedEncoding {
            path: path.into(),
            found: "non-PCM WAV format tag".into(),
        },
        other => Error::MalformedWav {
            path: path.into(),
            reason: other.to_string(),
        },
    })?;
    let spec = reader.spec();
    let channels = spec.channels as usize;
    let encoding = describe(&spec);
    let supported = matches!(
        (spec.sample_format, spec.bits_per_sample),
        (SampleFormat::Int, 16) | (SampleFormat::Int, 24) | (SampleFormat::Float, 32)
    );
    if !supported || !(1..=2).contains(&channels) {
        return Err(Error::UnsupportedEncoding {
            path: path.into(),
            found: encoding,
        });
    }

    let malformed = |e: hound::Error| Error::MalformedWav {
        path: path.into(),
        reason: e.to_string(),
    };
    let interleaved: Vec<f64> = match spec.sample_format {
        SampleFormat::Int => {
            let scale = 1.0 / f64::from(1u32 << (spec.bits_per_sample - 1));
            reader
                .into_samples::<i32>()
                .map(|s| s.map(|v| f64::from(v) * scale))
                .collect::<std::result::Result<_, _>>()
                .map_err(malformed)?
        }
        SampleFormat::Float => reader
            .into_samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<std::result::Result<_, _>>()
            .map_err(malformed)?,
    };

    let mono: Vec<f64> = if channels == 1 {
        interleaved
    } else {
        interleaved
            .chunks_exact(channels)
            .map(|frame| frame.iter().sum::<f64>() / channels as f64)
            .collect()
    };
    AudioBuffer::normalized(mono, spec.sample_rate)
}

/// [`load_wav`] followed by conversion to [`CANONICAL_RATE`].
pub fn load_audio(path: impl AsRef<Path>) -> Result<AudioBuffer> {
    let buf = load_wav(path)?;
    Ok(resample(&buf, CANONICAL_RATE))
}

fn describe(spec: &WavSpec) -> String {
    let kind = match spec.sample_format {
        SampleFormat::Int => "integer",
        SampleFormat::Float => "float",
    };
    format!(
        "{}-bit {kind}, {} channel(s)",
        spec.bits_per_sample, spec.channels
    )
}

/// Writes 16-bit PCM. Samples are expected in `[-1, 1]`.
pub fn write_wav_i16(
    path: impl AsRef<Path>,
    channels: &[&[f64]],
    sample_rate: u32,
) -> Result<()> {
    let path = path.as_ref();
    let spec = WavSpec {
        channels: channels.len() as u16,
        sample_rate,
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    };
    write_interleaved(path, spec, channels, |w, s| {
        w.write_sample((s * 32768.0).round().clamp(-32768.0, 32767.0) as i16)
    })
}

/// Writes 32-bit float PCM.
pub fn write_wav_f32(
    path: impl AsRef<Path>,
    channels: &[&[f64]],
    sample_rate: u32,
) -> Result<()> {
    let path = path.as_ref();
    let spec = WavSpec {
        channels: channels.len() as u16,
        sample_rate,
        bits_per_sample: 32,
        sample_format: SampleFormat::Float,
    };
    write_interleaved(path, spec, channels, |w, s| w.write_sample(s as f32))
}

fn write_interleaved<W>(
    path: &Path,
    spec: WavSpec,
    channels: &[&[f64]],
    mut put: W,
) -> Result<()>
where
    W: FnMut(&mut WavWriter<std::io::BufWriter<std::fs::File>>, f64) -> hound::Result<()>,
{
    if channels.is_empty() {
        return Err(Error::InvalidParameter("no channels to write".into()));
    }
    let len = channels[0].len();
    if channels.iter().any(|c| c.len() != len) {
        return Err(Error::InvalidParameter("channel lengths differ".into()));
    }
    let to_err = |e: hound::Error| match e {
        hound::Error::IoError(io) => Error::io(path, io),
        other => Error::MalformedWav {
            path: path.into(),
            reason: other.to_string(),
        },
    };
    let mut writer = WavWriter::create(path, spec).map_err(to_err)?;
    for i in 0..len {
        for ch in channels {
            put(&mut writer, ch[i]).map_err(to_err)?;
        }
    }
    writer.finalize().map_err(to_err)
}
