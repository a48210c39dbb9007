use estbench::io::{
    embedded, embedded_names, embedded_nasa10, parse_dataset, parse_promise, write_dataset, ColumnMapping,
};
use estbench::model::{Attribute, RatingLevel};

const COC81_SAMPLE: &str = "\
% two rows in the PROMISE COCOMO-81 layout
@relation cocomo81
@attribute rely numeric
@attribute data numeric
@attribute cplx numeric
@attribute time numeric
@attribute stor numeric
@attribute virt numeric
@attribute turn numeric
@attribute acap numeric
@attribute aexp numeric
@attribute pcap numeric
@attribute vexp numeric
@attribute lexp numeric
@attribute modp numeric
@attribute tool numeric
@attribute sced numeric
@attribute loc numeric
@attribute actual numeric
@data
0.88,1.16,0.7,1,1.06,1.15,1.07,1.19,1.13,1.17,1.1,1,1.24,1.1,1.04,113,2040
1.4,1.08,1.3,1.11,1.56,1,1.07,0.86,0.82,0.86,0.9,1,0.91,1,1.23,293,1600
";

#[test]
fn nasa10_embedding() {
    let d = embedded_nasa10();
    assert_eq!(d.len(), 17);
    assert_eq!((d.projects()[0].kloc, d.projects()[0].effort), (77.0, Some(1830.0)));
    assert_eq!((d.projects()[1].kloc, d.projects()[1].effort), (24.0, Some(648.0)));
    assert_eq!(d.efforts().iter().sum::<f64>(), 19046.0);
    assert_eq!(embedded_names(), ["nasa10"]);
    assert_eq!(embedded("NASA10"), Some(d));
}

#[test]
fn nasa10_round_trips() {
    let d = embedded_nasa10();
    assert_eq!(parse_dataset(&write_dataset(&d).unwrap(), "nasa10").unwrap(), d);
}

#[test]
fn coc81_layout_maps_values_to_ratings() {
    let d = parse_promise(COC81_SAMPLE, &ColumnMapping::coc81(), "coc81").unwrap();
    assert_eq!(d.len(), 2);
    let first = &d.projects()[0];
    assert_eq!((first.kloc, first.effort), (113.0, Some(2040.0)));
    assert_eq!(first.ratings.get(Attribute::Rely), RatingLevel::new(2).ok());
    assert_eq!(first.ratings.get(Attribute::Data), RatingLevel::new(5).ok());
    assert_eq!(first.ratings.get(Attribute::Cplx), RatingLevel::new(1).ok());
    let second = &d.projects()[1];
    assert_eq!(second.ratings.get(Attribute::Rely), RatingLevel::new(5).ok());
    assert_eq!(second.ratings.get(Attribute::Stor), RatingLevel::new(6).ok());
    // attributes with no COCOMO-81 counterpart stay unrated
    assert_eq!(first.ratings.get(Attribute::Prec), None);
}

#[test]
fn coc81_layout_as_csv() {
    let mut csv = String::new();
    let mut header = Vec::new();
    for line in COC81_SAMPLE.lines() {
        if let Some(rest) = line.strip_prefix("@attribute ") {
            header.push(rest.split_whitespace().next().unwrap());
        } else if !line.starts_with('@') && !line.starts_with('%') {
            csv.push_str(line);
            csv.push('\n');
        }
    }
    let text = format!("{}\n{csv}", header.join(","));
    let from_csv = parse_promise(&text, &ColumnMapping::coc81(), "coc81").unwrap();
    let from_arff = parse_promise(COC81_SAMPLE, &ColumnMapping::coc81(), "coc81").unwrap();
    assert_eq!(from_csv, from_arff);
}
