use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Site;

/// Ordered single-state alphabet. Index 0 is the minimal element `-`, the
/// last index the maximal element `+`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    labels: Vec<char>,
}

impl Alphabet {
    pub const MAX_SIZE: usize = 16;

    /// `-`, then `a`, `b`, ... for intermediate symbols, then `+`.
    pub fn new(size: usize) -> Result<Self> {
        if !(2..=Self::MAX_SIZE).contains(&size) {
            return Err(Error::invalid(format!("alphabet size {size} outside 2..=16")));
        }
        let mut labels = vec!['-'];
        labels.extend((0..size - 2).map(|i| (b'a' + i as u8) as char));
        labels.push('+');
        Ok(Alphabet { labels })
    }

    pub fn binary() -> Self {
        Alphabet { labels: vec!['-', '+'] }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn minus(&self) -> u8 {
        0
    }

    pub fn plus(&self) -> u8 {
        (self.labels.len() - 1) as u8
    }

    pub fn label(&self, index: u8) -> char {
        self.labels[index as usize]
    }

    pub fn index_of(&self, label: char) -> Option<u8> {
        self.labels.iter().position(|&c| c == label).map(|i| i as u8)
    }
}

/// Rectangular window `[x0, x0+width) × [y0, y0+height)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Region {
    pub x0: i64,
    pub y0: i64,
    pub width: usize,
    pub height: usize,
}

impl Region {
    pub fn new(x0: i64, y0: i64, width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("region must be nonempty"));
        }
        Ok(Region { x0, y0, width, height })
    }

    /// Square `[-r, r]²`.
    pub fn centered(radius: usize) -> Self {
        let side = 2 * radius + 1;
        Region { x0: -(radius as i64), y0: -(radius as i64), width: side, height: side }
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }

    pub fn contains(&self, s: Site) -> bool {
        s.x >= self.x0
            && s.y >= self.y0
            && s.x < self.x0 + self.width as i64
            && s.y < self.y0 + self.height as i64
    }

    /// Row-major index of `s`; rows run from `y0` upwards.
    pub fn index(&self, s: Site) -> Option<usize> {
        self.contains(s)
            .then(|| (s.y - self.y0) as usize * self.width + (s.x - self.x0) as usize)
    }

    pub fn site(&self, index: usize) -> Site {
        Site::new(self.x0 + (index % self.width) as i64, self.y0 + (index / self.width) as i64)
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.area()).map(|i| self.site(i))
    }
}

/// Symbol indices over a rectangular window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    region: Region,
    values: Vec<u8>,
}

impl Configuration {
    pub fn new(region: Region, values: Vec<u8>) -> Result<Self> {
        if values.len() != region.area() {
            return Err(Error::invalid(format!(
                "configuration has {} values for a window of {} sites",
                values.len(),
                region.area()
            )));
        }
        Ok(Configuration { region, values })
    }

    pub fn constant(region: Region, value: u8) -> Self {
        Configuration { region, values: vec![value; region.area()] }
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn get(&self, s: Site) -> Option<u8> {
        self.region.index(s).map(|i| self.values[i])
    }

    pub fn set(&mut self, s: Site, v: u8) -> Result<()> {
        let i = self.region.index(s).ok_or_else(|| Error::invalid(format!("site {s:?} outside window")))?;
        self.values[i] = v;
        Ok(())
    }

    /// Mean spin with `-` mapped to -1 and `+` to +1 (binary alphabets).
    pub fn magnetization(&self) -> f64 {
        let plus = self.values.iter().filter(|&&v| v != 0).count() as f64;
        (2.0 * plus - self.values.len() as f64) / self.values.len() as f64
    }

    /// Snapshot text: header `W H x0 y0`, then one line per row starting at `y0`.
    pub fn to_snapshot(&self, alphabet: &Alphabet) -> String {
        let r = self.region;
        let mut out = format!("{} {} {} {}\n", r.width, r.height, r.x0, r.y0);
        for row in self.values.chunks(r.width) {
            for &v in row {
                out.push(alphabet.label(v));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_snapshot(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let mut lines = text.lines();
        let region = parse_header(lines.next().ok_or_else(|| Error::parse("empty snapshot"))?)?;
        let mut values = Vec::with_capacity(region.area());
        for row in 0..region.height {
            let line = lines.next().ok_or_else(|| Error::parse(format!("snapshot missing row {row}")))?;
            if line.chars().count() != region.width {
                return Err(Error::parse(format!("snapshot row {row} has wrong width")));
            }
            for c in line.chars() {
                values.push(
                    alphabet.index_of(c).ok_or_else(|| Error::parse(format!("unknown symbol {c:?}")))?,
                );
            }
        }
        Configuration::new(region, values)
    }
}

fn parse_header(line: &str) -> Result<Region> {
    let f: Vec<&str> = line.split_whitespace().collect();
    if f.len() != 4 {
        return Err(Error::parse(format!("bad snapshot header {line:?}")));
    }
    let num = |s: &str| s.parse::<i64>().map_err(|_| Error::parse(format!("bad snapshot header {line:?}")));
    let (w, h) = (num(f[0])?, num(f[1])?);
    if w <= 0 || h <= 0 {
        return Err(Error::parse("snapshot dimensions must be positive"));
    }
    Region::new(num(f[2])?, num(f[3])?, w as usize, h as usize)
}

/// Sample stream: one JSON metadata line followed by snapshot blocks.
pub fn write_stream(metadata: &serde_json::Value, alphabet: &Alphabet, configs: &[Configuration]) -> String {
    let mut out = String::new();
    writeln!(out, "{metadata}").expect("write to string");
    for c in configs {
        out.push_str(&c.to_snapshot(alphabet));
    }
    out
}

pub fn read_stream(text: &str, alphabet: &Alphabet) -> Result<(serde_json::Value, Vec<Configuration>)> {
    let (head, mut rest) = text.split_once('\n').ok_or_else(|| Error::parse("stream without metadata"))?;
    let meta: serde_json::Value = serde_json::from_str(head)?;
    let mut configs = Vec::new();
    while !rest.trim().is_empty() {
        let header = rest.lines().next().expect("nonempty");
        let region = parse_header(header)?;
        let block_lines = 1 + region.height;
        let mut end = 0;
        for (i, l) in rest.split_inclusive('\n').enumerate() {
            if i == block_lines {
                break;
            }
            end += l.len();
        }
        configs.push(Configuration::from_snapshot(&rest[..end], alphabet)?);
        rest = &rest[end..];
    }
    Ok((meta, configs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_labels() {
        let a = Alphabet::new(4).unwrap();
        assert_eq!((0..4).map(|i| a.label(i)).collect::<String>(), "-ab+");
        assert!(Alphabet::new(1).is_err());
        assert!(Alphabet::new(17).is_err());
        assert_eq!(Alphabet::binary().plus(), 1);
    }

    #[test]
    fn snapshot_round_trip() {
        let region = Region::new(-2, 5, 3, 2).unwrap();
        let c = Configuration::new(region, vec![0, 1, 1, 1, 0, 0]).unwrap();
        let a = Alphabet::binary();
        let text = c.to_snapshot(&a);
        assert_eq!(text, "3 2 -2 5\n-++\n+--\n");
        assert_eq!(Configuration::from_snapshot(&text, &a).unwrap(), c);
        assert_eq!(c.get(Site::new(-2, 6)), Some(1));
        assert_eq!(c.get(Site::new(1, 6)), None);
    }

    #[test]
    fn stream_round_trip() {
        let a = Alphabet::binary();
        let r = Region::new(0, 0, 2, 2).unwrap();
        let cs = vec![Configuration::constant(r, 1), Configuration::new(r, vec![0, 1, 0, 0]).unwrap()];
        let meta = serde_json::json!({"seed": 3});
        let text = write_stream(&meta, &a, &cs);
        let (m, back) = read_stream(&text, &a).unwrap();
        assert_eq!(m, meta);
        assert_eq!(back, cs);
    }
}
