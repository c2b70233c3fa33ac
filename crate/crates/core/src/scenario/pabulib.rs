//! Reader and writer for the Pabulib `.pb` text format.
//!
//! A file has three sections introduced by the lines `META`, `PROJECTS` and
//! `VOTES`. Each section starts with a `;`-separated header row. Columns the
//! crate does not interpret are kept as opaque per-row metadata.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

use super::{BudgetingScenario, RawBallot, RawProject, RawScenario};
use crate::set::MAX_PROJECTS;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based line number; for a missing section, the line after the last one.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing {0} section")]
    MissingSection(&'static str),
    #[error("{section} header lacks the `{field}` column")]
    MissingColumn {
        section: &'static str,
        field: &'static str,
    },
    #[error("META has no `budget` entry")]
    MissingBudget,
    #[error("`{field}` is not a whole number of money units: `{value}`")]
    NotAnInteger { field: &'static str, value: String },
    #[error("`{field}` must be at least 1")]
    NotPositive { field: &'static str },
    #[error("expected {expected} fields, found {found}")]
    FieldCount { expected: usize, found: usize },
    #[error("vote of `{voter}` names undeclared project `{project}`")]
    UnknownProject { voter: String, project: String },
    #[error("duplicate project id `{0}`")]
    DuplicateProject(String),
    #[error("duplicate voter id `{0}`")]
    DuplicateVoter(String),
    #[error("more than {MAX_PROJECTS} projects")]
    TooManyProjects,
    #[error("row outside of any section")]
    OutsideSection,
    #[error("section {0} appears twice")]
    RepeatedSection(&'static str),
    #[error("malformed row: {0}")]
    Malformed(String),
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Meta,
    Projects,
    Votes,
}

impl Section {
    fn name(self) -> &'static str {
        match self {
            Section::Meta => "META",
            Section::Projects => "PROJECTS",
            Section::Votes => "VOTES",
        }
    }
}

struct Table {
    header_line: usize,
    header: Vec<String>,
    rows: Vec<(usize, Vec<String>)>,
}

fn split_row(line_no: usize, line: &str) -> Result<Vec<String>, ParseError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b';')
        .has_headers(false)
        .flexible(true)
        .from_reader(line.as_bytes());
    let mut record = csv::StringRecord::new();
    match reader.read_record(&mut record) {
        Ok(true) => Ok(record.iter().map(|f| f.trim().to_string()).collect()),
        Ok(false) => Ok(Vec::new()),
        Err(e) => Err(err(line_no, ParseErrorKind::Malformed(e.to_string()))),
    }
}

/// Parses an integer amount; integral decimals such as `1500.00` are accepted.
fn parse_amount(line: usize, field: &'static str, value: &str) -> Result<u64, ParseError> {
    let not_int = || {
        err(
            line,
            ParseErrorKind::NotAnInteger {
                field,
                value: value.to_string(),
            },
        )
    };
    let (whole, frac) = match value.split_once('.') {
        Some((w, f)) => (w, f),
        None => (value, ""),
    };
    if whole.is_empty() || !whole.bytes().all(|b| b.is_ascii_digit()) {
        return Err(not_int());
    }
    if !frac.bytes().all(|b| b == b'0') {
        return Err(not_int());
    }
    let amount: u64 = whole.parse().map_err(|_| not_int())?;
    if amount == 0 {
        return Err(err(line, ParseErrorKind::NotPositive { field }));
    }
    Ok(amount)
}

fn column(table: &Table, section: Section, field: &'static str) -> Result<usize, ParseError> {
    table.header.iter().position(|h| h == field).ok_or_else(|| {
        err(
            table.header_line,
            ParseErrorKind::MissingColumn {
                section: section.name(),
                field,
            },
        )
    })
}

fn extras(header: &[String], row: &[String], skip: &[usize]) -> BTreeMap<String, String> {
    header
        .iter()
        .zip(row)
        .enumerate()
        .filter(|(i, (_, v))| !skip.contains(i) && !v.is_empty())
        .map(|(_, (h, v))| (h.clone(), v.clone()))
        .collect()
}

/// Parses a Pabulib document into a raw (unvalidated) scenario.
///
/// Metadata keys other than `budget` are kept verbatim in [`RawScenario::meta`].
pub fn parse_pabulib(text: &str) -> Result<RawScenario, ParseError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut tables: [Option<Table>; 3] = [None, None, None];
    let mut current: Option<Section> = None;
    let mut last_line = 0;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        let section = match line {
            "META" => Some(Section::Meta),
            "PROJECTS" => Some(Section::Projects),
            "VOTES" => Some(Section::Votes),
            _ => None,
        };
        if let Some(s) = section {
            if tables[s as usize].is_some() {
                return Err(err(line_no, ParseErrorKind::RepeatedSection(s.name())));
            }
            current = Some(s);
            continue;
        }
        let Some(s) = current else {
            return Err(err(line_no, ParseErrorKind::OutsideSection));
        };
        let fields = split_row(line_no, line)?;
        match &mut tables[s as usize] {
            slot @ None => {
                *slot = Some(Table {
                    header_line: line_no,
                    header: fields,
                    rows: Vec::new(),
                })
            }
            Some(t) => {
                if fields.len() != t.header.len() {
                    // a trailing empty vote field is sometimes dropped entirely
                    if !(fields.len() + 1 == t.header.len() && s == Section::Votes) {
                        return Err(err(
                            line_no,
                            ParseErrorKind::FieldCount {
                                expected: t.header.len(),
                                found: fields.len(),
                            },
                        ));
                    }
                }
                t.rows.push((line_no, fields));
            }
        }
    }

    let eof = last_line + 1;
    let [meta, projects, votes] = tables;
    let meta = meta.ok_or_else(|| err(eof, ParseErrorKind::MissingSection("META")))?;
    let projects = projects.ok_or_else(|| err(eof, ParseErrorKind::MissingSection("PROJECTS")))?;
    let votes = votes.ok_or_else(|| err(eof, ParseErrorKind::MissingSection("VOTES")))?;

    let mut raw = RawScenario::default();
    let mut budget = None;
    for (line, row) in &meta.rows {
        if row.len() < 2 {
            return Err(err(
                *line,
                ParseErrorKind::FieldCount {
                    expected: 2,
                    found: row.len(),
                },
            ));
        }
        if row[0] == "budget" {
            budget = Some(parse_amount(*line, "budget", &row[1])?);
        } else {
            raw.meta.insert(row[0].clone(), row[1].clone());
        }
    }
    raw.budget = budget.ok_or_else(|| err(meta.header_line, ParseErrorKind::MissingBudget))?;

    let id_col = column(&projects, Section::Projects, "project_id")?;
    let cost_col = column(&projects, Section::Projects, "cost")?;
    let name_col = projects.header.iter().position(|h| h == "name");
    let mut seen = HashSet::new();
    for (line, row) in &projects.rows {
        let id = row[id_col].clone();
        if !seen.insert(id.clone()) {
            return Err(err(*line, ParseErrorKind::DuplicateProject(id)));
        }
        if seen.len() > MAX_PROJECTS {
            return Err(err(*line, ParseErrorKind::TooManyProjects));
        }
        let mut skip = vec![id_col, cost_col];
        skip.extend(name_col);
        raw.projects.push(RawProject {
            cost: parse_amount(*line, "cost", &row[cost_col])?,
            label: name_col.map(|c| row[c].clone()).unwrap_or_default(),
            extra: extras(&projects.header, row, &skip),
            id,
            line: *line,
        });
    }

    let voter_col = column(&votes, Section::Votes, "voter_id")?;
    let vote_col = column(&votes, Section::Votes, "vote")?;
    let mut voters = HashSet::new();
    for (line, row) in &votes.rows {
        let voter_id = row[voter_col].clone();
        if !voters.insert(voter_id.clone()) {
            return Err(err(*line, ParseErrorKind::DuplicateVoter(voter_id)));
        }
        let vote = row.get(vote_col).map(String::as_str).unwrap_or("");
        let approvals: Vec<String> = vote
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect();
        if let Some(unknown) = approvals.iter().find(|a| !seen.contains(*a)) {
            return Err(err(
                *line,
                ParseErrorKind::UnknownProject {
                    voter: voter_id,
                    project: unknown.clone(),
                },
            ));
        }
        raw.ballots.push(RawBallot {
            voter_id,
            approvals,
            extra: extras(&votes.header, row, &[voter_col, vote_col]),
            line: *line,
        });
    }
    Ok(raw)
}

fn write_rows(out: &mut String, title: &str, rows: Vec<Vec<String>>) {
    let mut writer = csv::WriterBuilder::new()
        .delimiter(b';')
        .quote_style(csv::QuoteStyle::Necessary)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        writer.write_record(&row).expect("writing to memory");
    }
    let bytes = writer.into_inner().expect("flushing to memory");
    out.push_str(title);
    out.push('\n');
    out.push_str(&String::from_utf8(bytes).expect("utf-8 in, utf-8 out"));
}

fn extra_columns<'a>(maps: impl Iterator<Item = &'a BTreeMap<String, String>>) -> Vec<String> {
    maps.flat_map(|m| m.keys().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Writes a scenario in Pabulib form: META, PROJECTS, VOTES, with metadata
/// keys and extra columns sorted and approvals listed in id order.
pub fn serialize_pabulib(scenario: &BudgetingScenario) -> String {
    let mut out = String::new();

    let mut meta = scenario.meta().clone();
    meta.insert("budget".into(), scenario.budget().to_string());
    let mut rows = vec![vec!["key".to_string(), "value".to_string()]];
    rows.extend(meta.into_iter().map(|(k, v)| vec![k, v]));
    write_rows(&mut out, "META", rows);

    let cols = extra_columns(scenario.projects().iter().map(|p| &p.extra));
    let mut header = vec!["project_id".to_string(), "cost".into(), "name".into()];
    header.extend(cols.iter().cloned());
    let mut rows = vec![header];
    for p in scenario.projects() {
        let mut row = vec![p.id.clone(), p.cost.to_string(), p.label.clone()];
        row.extend(cols.iter().map(|c| p.extra.get(c).cloned().unwrap_or_default()));
        rows.push(row);
    }
    write_rows(&mut out, "PROJECTS", rows);

    let cols = extra_columns(scenario.ballots().iter().map(|b| &b.extra));
    let mut header = vec!["voter_id".to_string(), "vote".into()];
    header.extend(cols.iter().cloned());
    let mut rows = vec![header];
    for b in scenario.ballots() {
        let mut row = vec![b.voter_id.clone(), scenario.ids_of(&b.approvals).join(",")];
        row.extend(cols.iter().map(|c| b.extra.get(c).cloned().unwrap_or_default()));
        rows.push(row);
    }
    write_rows(&mut out, "VOTES", rows);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{validate, ValidationPolicy};

    const EXAMPLE_ONE: &str = "META\nkey;value\ndescription;worked example\nbudget;9\nvote_type;approval\n\
PROJECTS\nproject_id;cost;name\nA;2;Alpha\nB;3;Beta\nC;3;Gamma\nD;1;Delta\nE;1;Epsilon\n\
VOTES\nvoter_id;vote\n1;A,B,D,E\n2;A,B,C\n3;C,E\n4;A,B,D\n";

    #[test]
    fn minimal_file() {
        let raw =
            parse_pabulib("META\nkey;value\nbudget;5\nPROJECTS\nproject_id;cost\np1;3\nVOTES\nvoter_id;vote\nv1;p1\n")
                .unwrap();
        assert_eq!(raw.budget, 5);
        assert_eq!(raw.projects.len(), 1);
        assert_eq!(raw.ballots.len(), 1);
        assert_eq!(raw.ballots[0].approvals, ["p1"]);
    }

    #[test]
    fn example_one_file() {
        let raw = parse_pabulib(EXAMPLE_ONE).unwrap();
        assert_eq!(raw.budget, 9);
        assert_eq!(raw.projects.len(), 5);
        assert_eq!(raw.ballots.len(), 4);
        let costs: Vec<u64> = raw.projects.iter().map(|p| p.cost).collect();
        assert_eq!(costs, [2, 3, 3, 1, 1]);
        assert_eq!(raw.meta["vote_type"], "approval");
    }

    #[test]
    fn unknown_project_cites_vote_line() {
        let text = "META\nkey;value\nbudget;5\nPROJECTS\nproject_id;cost\np1;3\nVOTES\nvoter_id;vote\nv1;p1\nv2;p9\n";
        let e = parse_pabulib(text).unwrap_err();
        assert_eq!(e.line, 10);
        assert!(matches!(e.kind, ParseErrorKind::UnknownProject { ref project, .. } if project == "p9"));
    }

    #[test]
    fn rejects_fractional_and_zero_costs() {
        let text = "META\nkey;value\nbudget;5\nPROJECTS\nproject_id;cost\np1;2.5\nVOTES\nvoter_id;vote\n";
        assert!(matches!(
            parse_pabulib(text).unwrap_err().kind,
            ParseErrorKind::NotAnInteger { field: "cost", .. }
        ));
        let text = "META\nkey;value\nbudget;5\nPROJECTS\nproject_id;cost\np1;0\nVOTES\nvoter_id;vote\n";
        assert_eq!(parse_pabulib(text).unwrap_err().line, 6);
        let text = "META\nkey;value\nbudget;5.00\nPROJECTS\nproject_id;cost\np1;3.0\nVOTES\nvoter_id;vote\n";
        assert_eq!(parse_pabulib(text).unwrap().budget, 5);
    }

    #[test]
    fn missing_sections_and_budget() {
        let e = parse_pabulib("META\nkey;value\nbudget;5\nPROJECTS\nproject_id;cost\np1;3\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingSection("VOTES"));
        let e = parse_pabulib("META\nkey;value\nx;1\nPROJECTS\nproject_id;cost\np1;3\nVOTES\nvoter_id;vote\n")
            .unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingBudget);
        let e = parse_pabulib("META\nkey;value\nbudget;5\nPROJECTS\nid;cost\np1;3\nVOTES\nvoter_id;vote\n")
            .unwrap_err();
        assert_eq!(e.line, 5);
    }

    #[test]
    fn round_trip_preserves_unknown_metadata_and_empty_ballots() {
        let text = "META\nkey;value\nbudget;10\ncountry;Poland\nunit;Warsaw\n\
PROJECTS\nproject_id;cost;name;category\n1;4;\"Park; lights\";urban\n2;6;Court;sport\n\
VOTES\nvoter_id;age;vote\nv1;33;1,2\nv2;;\nv3;51;2\n";
        let (s, _) = validate(parse_pabulib(text).unwrap(), ValidationPolicy::Strict).unwrap();
        assert_eq!(s.meta()["country"], "Poland");
        assert_eq!(s.projects()[0].label, "Park; lights");
        assert!(s.ballots()[1].approvals.is_empty());
        let doc = serialize_pabulib(&s);
        let (again, _) = validate(parse_pabulib(&doc).unwrap(), ValidationPolicy::Strict).unwrap();
        assert_eq!(again, s);
        assert_eq!(serialize_pabulib(&again), doc);
    }
}
