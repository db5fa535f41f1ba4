use std::fmt::Write as _;

use sessiontiling_core::tiling::SegmentationResult;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub gap: usize,
    pub similarity: f64,
    pub depth: f64,
    pub boundary: bool,
}

impl ProfileRow {
    pub fn rows(result: &SegmentationResult) -> impl Iterator<Item = ProfileRow> + '_ {
        let p = &result.profile;
        p.sims
            .iter()
            .zip(&p.depths)
            .enumerate()
            .map(|(gap, (&similarity, &depth))| ProfileRow {
                gap,
                similarity,
                depth,
                boundary: result.boundaries.contains(&gap),
            })
    }
}

/// Per-gap TSV: a header, then `gap_index<TAB>similarity<TAB>depth<TAB>boundary`
/// rows under a `# session k` comment for each session (0-based).
pub fn write_profile<'a, I>(results: I) -> String
where
    I: IntoIterator<Item = &'a SegmentationResult>,
{
    let mut out = String::from("gap_index\tsimilarity\tdepth\tboundary\n");
    for (k, result) in results.into_iter().enumerate() {
        writeln!(out, "# session {k}").expect("writing to a String");
        for row in ProfileRow::rows(result) {
            writeln!(
                out,
                "{}\t{:.6}\t{:.6}\t{}",
                row.gap,
                row.similarity,
                row.depth,
                u8::from(row.boundary)
            )
            .expect("writing to a String");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use sessiontiling_core::tiling::{segment_profile, SegmenterConfig};

    #[test]
    fn one_row_per_gap() {
        let r = segment_profile(&[0.9, 0.1, 0.9, 0.8], &SegmenterConfig::offline(0.5));
        let text = write_profile([&r]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2 + 4);
        assert_eq!(lines[1], "# session 0");
        assert_eq!(lines[3], "1\t0.100000\t1.600000\t1");
        assert!(lines[2].ends_with("\t0"));
    }
}
