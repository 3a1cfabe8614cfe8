use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One JSON object per line.
    Json,
    /// Header row plus one record per line.
    Csv,
}

pub fn open(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes homogeneous records as JSON lines or CSV.
pub struct RecordWriter {
    inner: Inner,
}

enum Inner {
    Json(Box<dyn Write>),
    Csv(csv::Writer<Box<dyn Write>>),
}

impl RecordWriter {
    pub fn new(out: Box<dyn Write>, format: Format) -> Self {
        let inner = match format {
            Format::Json => Inner::Json(out),
            Format::Csv => Inner::Csv(csv::Writer::from_writer(out)),
        };
        Self { inner }
    }

    pub fn write<T: Serialize>(&mut self, record: &T) -> io::Result<()> {
        match &mut self.inner {
            Inner::Json(w) => {
                serde_json::to_writer(&mut *w, record)?;
                w.write_all(b"\n")
            }
            Inner::Csv(w) => w.serialize(record).map_err(io::Error::other),
        }
    }

    pub fn finish(self) -> io::Result<()> {
        match self.inner {
            Inner::Json(mut w) => w.flush(),
            Inner::Csv(mut w) => w.flush(),
        }
    }
}
