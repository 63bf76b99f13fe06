use std::fs;
use std::path::Path;

use graphmean::data::{self, Dataset, GxlSchema, Provenance};
use graphmean::frechet::Sample;
use graphmean::{Error, Result};

use crate::args::{Format, InputArgs};
use crate::CliError;

pub fn schema(args: &InputArgs) -> Result<GxlSchema, CliError> {
    let Some(path) = &args.schema else {
        return Ok(GxlSchema::letter());
    };
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let schema: GxlSchema = serde_json::from_str(&text)
        .map_err(|e| Error::Parse { location: path.display().to_string(), message: e.to_string() })?;
    schema.validate()?;
    Ok(schema)
}

/// Reads a native graph or dataset, a single GXL graph, or a CXL-indexed
/// GXL collection.
pub fn load(path: &Path, args: &InputArgs) -> Result<Dataset, CliError> {
    if !path.exists() {
        return Err(io_error(path, std::io::ErrorKind::NotFound.into()).into());
    }
    let dataset = match args.format {
        Format::Native => data::read_graph_or_dataset(path)?,
        Format::Gxl => {
            let schema = schema(args)?;
            let is_index = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("cxl"));
            if is_index {
                let dir = path.parent().unwrap_or(Path::new("."));
                data::load_dataset(dir, path, &schema)?
            } else {
                let bytes = fs::read(path).map_err(|e| io_error(path, e))?;
                let g = data::parse_gxl(&bytes, &schema)?;
                let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                Dataset::new(name, Sample::new(vec![g])?, None, Provenance::new(path.display().to_string()))?
            }
        }
    };
    Ok(dataset)
}

pub fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), source }
}
