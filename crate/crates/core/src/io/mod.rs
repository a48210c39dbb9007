//! Reading datasets and writing rank tables.

pub mod dataset;
pub mod promise;
pub mod report;

pub use dataset::{
    embedded, embedded_names, embedded_nasa10, parse_dataset, parse_dataset_with_warnings, write_dataset, ParsedDataset,
};
pub use promise::{parse_promise, ColumnMapping};
pub use report::{parse_error_csv, parse_report_csv, render_groups, render_report, write_error_csv, ReportFormat};
