//! System identifiers, cocycle descriptor files, and point literals.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use liyorke::cell::{Cell, CellPartition};
use liyorke::perm::Perm;
use liyorke::point::{CircleAngle, OdometerDigits, Point, SymbolicWord};
use liyorke::skew::{FiberAction, FiniteCocycle, OdometerFiberSelector, OdometerSkew, SkewProduct};
use liyorke::systems::{Chacon, CircleExtension, FullShift, Odometer, Rotation, DEFAULT_ALPHA};
use liyorke::System;

/// Parses a system identifier such as `full-shift:2`, `chacon`,
/// `rotation:0.41421356`, `odometer:2,2,2`, `circle-ext:k=3`, or
/// `product(chacon,rotation:0.41421356)`.
pub fn parse_system(id: &str) -> Result<System> {
    let id = id.trim();
    if let Some(inner) = id.strip_prefix("product(").and_then(|s| s.strip_suffix(')')) {
        let split = top_level_comma(inner)
            .ok_or_else(|| anyhow!("product(...) needs two comma-separated systems"))?;
        let left = parse_system(&inner[..split])?;
        let right = parse_system(&inner[split + 1..])?;
        return Ok(System::product(left, right));
    }
    let (name, args) = match id.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (id, None),
    };
    match name {
        "full-shift" => {
            let k: u8 = args.unwrap_or("2").parse().context("alphabet size")?;
            Ok(System::Shift(FullShift::new(k).map_err(stringify)?))
        }
        "chacon" => {
            if args.is_some() {
                bail!("chacon takes no parameters");
            }
            Ok(System::Chacon(Chacon::new()))
        }
        "rotation" => {
            let alpha: f64 = args.ok_or_else(|| anyhow!("rotation needs an angle"))?.parse()?;
            Ok(System::Rotation(Rotation::new(alpha).map_err(stringify)?))
        }
        "odometer" => {
            let bases: Vec<u32> = args
                .ok_or_else(|| anyhow!("odometer needs bases"))?
                .split(',')
                .map(|b| b.trim().parse().context("odometer base"))
                .collect::<Result<_>>()?;
            Ok(System::Odometer(Odometer::new(bases).map_err(stringify)?))
        }
        "circle-ext" => {
            let mut k: Option<u32> = None;
            let mut alpha = DEFAULT_ALPHA;
            for part in args.ok_or_else(|| anyhow!("circle-ext needs k=<order>"))?.split(',') {
                match part.trim().split_once('=') {
                    Some(("k", v)) => k = Some(v.parse().context("fiber order")?),
                    Some(("alpha", v)) => alpha = v.parse().context("rotation angle")?,
                    _ => bail!("unknown circle-ext parameter '{part}'"),
                }
            }
            let k = k.ok_or_else(|| anyhow!("circle-ext needs k=<order>"))?;
            Ok(System::CircleExtension(CircleExtension::new(k, alpha).map_err(stringify)?))
        }
        other => bail!("unknown system '{other}'"),
    }
}

fn top_level_comma(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

fn stringify(e: liyorke::Error) -> anyhow::Error {
    anyhow!("{e}")
}

/// A cocycle or odometer-selector descriptor, as stored in a TOML file:
/// fiber size, cells (one line per cell, permutations in one-line image
/// notation like "102"), or arcs with per-arc entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleSpec {
    /// "permutation" or "odometer-selector".
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiber_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiber_bases: Option<Vec<u32>>,
    /// Cell word length; inferred from the cell keys when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    /// Cylinder cells: word -> permutation image string (or action name).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cells: Option<BTreeMap<String, String>>,
    /// Arc cells: sorted boundaries, entries aligned with `perms`/`actions`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arcs: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perms: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actions: Option<Vec<String>>,
}

impl CocycleSpec {
    pub fn load(path: &Path) -> Result<CocycleSpec> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading descriptor {}", path.display()))?;
        let spec: CocycleSpec = toml::from_str(&text)
            .with_context(|| format!("parsing descriptor {}", path.display()))?;
        Ok(spec)
    }

    /// Applies the descriptor over a base system, producing the skew system.
    pub fn apply(&self, base: System) -> Result<System> {
        let partition = self.partition(&base)?;
        match self.kind.as_str() {
            "permutation" => {
                let fiber_size =
                    self.fiber_size.ok_or_else(|| anyhow!("permutation cocycle needs fiber_size"))?;
                let images = self.entry_list(&partition)?;
                let perms: Vec<Perm> = images
                    .iter()
                    .map(|s| parse_perm(s, fiber_size))
                    .collect::<Result<_>>()?;
                let cocycle =
                    FiniteCocycle::new(fiber_size, partition, perms).map_err(stringify)?;
                Ok(System::Skew(SkewProduct::new(base, cocycle)))
            }
            "odometer-selector" => {
                let bases = self
                    .fiber_bases
                    .clone()
                    .ok_or_else(|| anyhow!("odometer selector needs fiber_bases"))?;
                let entries = self.entry_list(&partition)?;
                let actions: Vec<FiberAction> = entries
                    .iter()
                    .map(|s| match s.as_str() {
                        "advance" | "odometer" => Ok(FiberAction::Advance),
                        "hold" | "identity" => Ok(FiberAction::Hold),
                        other => bail!("unknown fiber action '{other}'"),
                    })
                    .collect::<Result<_>>()?;
                let selector =
                    OdometerFiberSelector::new(partition, actions).map_err(stringify)?;
                let fiber = Odometer::new(bases).map_err(stringify)?;
                Ok(System::OdometerSkew(OdometerSkew::new(base, fiber, selector)))
            }
            other => bail!("unknown descriptor kind '{other}'"),
        }
    }

    /// The cell partition the descriptor defines over the base.
    fn partition(&self, base: &System) -> Result<CellPartition> {
        if let Some(arcs) = &self.arcs {
            return CellPartition::arcs(arcs.clone()).map_err(stringify);
        }
        let cells = self.cells.as_ref().ok_or_else(|| anyhow!("descriptor needs cells or arcs"))?;
        let window = cells.keys().next().map(|k| k.len()).unwrap_or(0);
        if window == 0 || cells.keys().any(|k| k.len() != window) {
            bail!("cell words must share one nonzero length");
        }
        if let Some(declared) = self.window {
            if declared != window {
                bail!("declared window {declared} does not match cell word length {window}");
            }
        }
        match base {
            System::Shift(s) => {
                let part =
                    CellPartition::symbol_window(s.alphabet_size(), window).map_err(stringify)?;
                ensure_complete(cells.len(), part.cell_count())?;
                Ok(part)
            }
            System::Chacon(_) => {
                let part = CellPartition::symbol_window(2, window).map_err(stringify)?;
                ensure_complete(cells.len(), part.cell_count())?;
                Ok(part)
            }
            System::Odometer(o) => {
                let part = CellPartition::digit_window(o.bases().to_vec(), window)
                    .map_err(stringify)?;
                ensure_complete(cells.len(), part.cell_count())?;
                Ok(part)
            }
            _ => bail!("cylinder cells need a symbolic or odometer base"),
        }
    }

    /// Entries ordered by cell index, whichever way the cells are given.
    fn entry_list(&self, partition: &CellPartition) -> Result<Vec<String>> {
        if let Some(per_arc) = self.perms.as_ref().or(self.actions.as_ref()) {
            if per_arc.len() != partition.cell_count() {
                bail!("need exactly one entry per arc cell");
            }
            return Ok(per_arc.clone());
        }
        let cells = self.cells.as_ref().expect("cells checked in partition()");
        let mut out = vec![String::new(); partition.cell_count()];
        for (word, entry) in cells {
            let symbols: Vec<u8> = word
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| anyhow!("bad cell word")))
                .collect::<Result<_>>()?;
            let probe = cell_index(partition, &symbols)?;
            out[probe] = entry.clone();
        }
        if out.iter().any(String::is_empty) {
            bail!("cells must cover the whole partition");
        }
        Ok(out)
    }
}

fn ensure_complete(given: usize, needed: usize) -> Result<()> {
    if given != needed {
        bail!("descriptor lists {given} cells, the partition has {needed}");
    }
    Ok(())
}

fn cell_index(partition: &CellPartition, symbols: &[u8]) -> Result<usize> {
    match partition {
        CellPartition::SymbolWindow { alphabet_size, window } => {
            if symbols.len() != *window {
                bail!("cell word length mismatch");
            }
            let mut idx = 0usize;
            for &s in symbols {
                if s >= *alphabet_size {
                    bail!("cell symbol outside alphabet");
                }
                idx = idx * (*alphabet_size as usize) + s as usize;
            }
            Ok(idx)
        }
        CellPartition::DigitWindow { bases, window } => {
            if symbols.len() != *window {
                bail!("cell word length mismatch");
            }
            let mut idx = 0usize;
            for j in (0..*window).rev() {
                if u32::from(symbols[j]) >= bases[j] {
                    bail!("cell digit outside base");
                }
                idx = idx * bases[j] as usize + symbols[j] as usize;
            }
            Ok(idx)
        }
        CellPartition::Arcs { .. } => bail!("arc partitions take per-arc entry lists"),
    }
}

fn parse_perm(image: &str, fiber_size: usize) -> Result<Perm> {
    let images: Vec<u8> = image
        .chars()
        .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| anyhow!("bad permutation digit")))
        .collect::<Result<_>>()?;
    if images.len() != fiber_size {
        bail!("permutation '{image}' does not match fiber size {fiber_size}");
    }
    Perm::from_images(images).map_err(stringify)
}

/// Builds the experiment system: base identifier plus optional descriptor.
pub fn build_system(id: &str, spec: Option<&CocycleSpec>) -> Result<System> {
    let base = parse_system(id)?;
    match spec {
        Some(s) => s.apply(base),
        None => Ok(base),
    }
}

/// Formats a point for reports: digit strings for symbolic and odometer
/// points, decimals for circle values.
pub fn format_point(p: &Point) -> String {
    match p {
        Point::Word(w) => w.symbols().iter().map(|&d| char::from(b'0' + d)).collect(),
        Point::Circle(a) => format!("{}", a.value()),
        Point::Odometer(d) => {
            d.digits().iter().map(u32::to_string).collect::<Vec<_>>().join(",")
        }
        Point::Product(pp) => format!("{};{}", format_point(&pp.left), format_point(&pp.right)),
        Point::Fibered(fp) => format!("{}|{}", format_point(&fp.base), fp.label),
    }
}

/// Parses a point literal against the system's space. Word points are digit
/// strings, circle points decimals, odometer points digit lists, fibered
/// points `base|label`, product points `left;right`.
pub fn parse_point(system: &System, s: &str) -> Result<Point> {
    let s = s.trim();
    match system {
        System::Shift(sh) => parse_word(s, sh.alphabet_size()),
        System::Chacon(_) => parse_word(s, 2),
        System::Rotation(_) => Ok(Point::Circle(CircleAngle::new(s.parse::<f64>()?))),
        System::Odometer(o) => parse_digits(s, o),
        System::CircleExtension(e) => {
            if let Some((y, root)) = s.split_once('@') {
                let p = e
                    .point(y.trim().parse()?, root.trim().parse()?)
                    .map_err(stringify)?;
                return Ok(p);
            }
            let (l, r) = s.split_once(';').ok_or_else(|| anyhow!("expected y@root or y;z"))?;
            let p = Point::product(
                Point::Circle(CircleAngle::new(l.trim().parse()?)),
                Point::Circle(CircleAngle::new(r.trim().parse()?)),
            );
            e.contains(&p).map_err(stringify)?;
            Ok(p)
        }
        System::Product(l, r) => {
            let (ls, rs) = s.split_once(';').ok_or_else(|| anyhow!("expected left;right"))?;
            Ok(Point::product(parse_point(l, ls)?, parse_point(r, rs)?))
        }
        System::Skew(sk) => {
            let (base, label) = s.rsplit_once('|').ok_or_else(|| anyhow!("expected base|label"))?;
            let label: usize = label.trim().parse()?;
            if label >= sk.cocycle().fiber_size() {
                bail!("label {label} outside fiber of size {}", sk.cocycle().fiber_size());
            }
            Ok(Point::fibered(parse_point(sk.base(), base)?, label))
        }
        System::OdometerSkew(os) => {
            let (base, digits) = s.split_once(';').ok_or_else(|| anyhow!("expected base;digits"))?;
            Ok(Point::product(parse_point(os.base(), base)?, parse_digits(digits, os.fiber())?))
        }
    }
}

fn parse_word(s: &str, alphabet: u8) -> Result<Point> {
    let digits: Vec<u8> = s
        .chars()
        .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| anyhow!("bad word digit '{c}'")))
        .collect::<Result<_>>()?;
    Ok(Point::Word(SymbolicWord::new(alphabet, digits).map_err(stringify)?))
}

fn parse_digits(s: &str, odometer: &Odometer) -> Result<Point> {
    let digits: Vec<u32> = s
        .split(',')
        .map(|d| d.trim().parse().context("odometer digit"))
        .collect::<Result<_>>()?;
    Ok(Point::Odometer(
        OdometerDigits::new(odometer.shared_bases(), digits).map_err(stringify)?,
    ))
}

/// Parses a cell literal: `cyl:010`, `arc:0.25,0.5`, or `whole`.
pub fn parse_cell(s: &str) -> Result<Cell> {
    let s = s.trim();
    if s == "whole" {
        return Ok(Cell::Whole);
    }
    if let Some(word) = s.strip_prefix("cyl:") {
        let symbols: Vec<u8> = word
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| anyhow!("bad cell digit")))
            .collect::<Result<_>>()?;
        return Ok(Cell::Cylinder(symbols));
    }
    if let Some(arc) = s.strip_prefix("arc:") {
        let (lo, hi) = arc.split_once(',').ok_or_else(|| anyhow!("arc needs lo,hi"))?;
        return Ok(Cell::Arc { lo: lo.trim().parse()?, hi: hi.trim().parse()? });
    }
    bail!("unknown cell literal '{s}' (expected cyl:<word>, arc:<lo>,<hi>, or whole)")
}

/// The system catalog with the properties each entry is used for.
/// Properties are asserted from the literature, not verified here.
pub fn catalog_text() -> String {
    let mut out = String::new();
    out.push_str("system catalog (properties asserted from literature, never verified here)\n\n");
    let rows = [
        ("full-shift:<k>", "full shift on k symbols", "weakly mixing; not minimal"),
        ("chacon", "Chacon substitution subshift", "minimal; weakly mixing"),
        ("rotation:<alpha>", "circle rotation by alpha turns", "minimal; distal (alpha irrational)"),
        ("odometer:<p1,p2,...>", "adding machine over the given bases", "minimal; distal; equicontinuous"),
        ("circle-ext:k=<k>[,alpha=<a>]", "k-fold circle extension of a rotation", "extension example; connected, so not conjugate to any k-point skew product"),
        ("product(<a>,<b>)", "product of two catalog systems", "properties inherited per factor"),
        ("<base> + cocycle file", "finite-fiber permutation skew product", "bijective fiber maps over clopen cells"),
        ("<base> + selector file", "odometer-or-identity fiber skew product", "fiber steps chosen per base cell"),
    ];
    for (id, what, props) in rows {
        out.push_str(&format!("  {id:34} {what}\n{:38}[{props}]\n", ""));
    }
    out
}
