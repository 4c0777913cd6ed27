use super::ProfileError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestOptions {
    pub delimiter: u8,
    pub quote: u8,
    pub has_header: bool,
    /// Cell values read as null, compared after trimming. Empty cells are
    /// always null.
    pub null_tokens: Vec<String>,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            delimiter: b',',
            quote: b'"',
            has_header: true,
            null_tokens: Vec::new(),
        }
    }
}

/// Rectangular table of raw cells. `None` is a null.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<String>>>,
}

impl Table {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, i: usize) -> impl Iterator<Item = Option<&str>> + '_ {
        self.rows.iter().map(move |r| r[i].as_deref())
    }

    /// Bytes of cell text held, a rough in-memory size of the data.
    pub fn footprint_bytes(&self) -> u64 {
        self.rows
            .iter()
            .flatten()
            .map(|c| c.as_ref().map_or(0, |s| s.len() as u64))
            .sum()
    }
}

pub fn ingest(source: &[u8], options: &IngestOptions) -> Result<Table, ProfileError> {
    if source.iter().all(u8::is_ascii_whitespace) {
        return Err(ProfileError::EmptyInput);
    }
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .quote(options.quote)
        .has_headers(false)
        .flexible(true)
        .from_reader(source);

    let is_null = |cell: &str| {
        let t = cell.trim();
        t.is_empty() || options.null_tokens.iter().any(|n| n == t)
    };

    let mut columns = None;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 1;
        let record = record.map_err(|e| ProfileError::Parse {
            line: e.position().map_or(line as u64, |p| p.line()),
            message: e.to_string(),
        })?;
        let Some(width) = columns.as_ref().map(Vec::len) else {
            columns = Some(if options.has_header {
                record.iter().map(|s| s.trim().to_string()).collect()
            } else {
                rows.push(
                    record
                        .iter()
                        .map(|c| (!is_null(c)).then(|| c.to_string()))
                        .collect(),
                );
                (1..=record.len()).map(|k| format!("column{k}")).collect()
            });
            continue;
        };
        if record.len() != width {
            return Err(ProfileError::Ragged {
                line: record.position().map_or(line as u64, |p| p.line()),
                expected: width,
                found: record.len(),
            });
        }
        rows.push(
            record
                .iter()
                .map(|c| (!is_null(c)).then(|| c.to_string()))
                .collect(),
        );
    }
    let columns = columns.ok_or(ProfileError::EmptyInput)?;
    Ok(Table { columns, rows })
}
