//! Bundled education sample data used throughout the docs and tests.

use crate::dataset::{load_dataset, parse_schema, Dataset};
use crate::hierarchy::{load_hierarchy, ConceptHierarchy};

pub const TABLE1_CSV: &str = "\
avg_edu_level,region,family_income_per_year,income_level
Illiterate,Cuba.north,$ 899,Low
fouryearscollege,USA.east,$ 30000,Medium
Fouryearscollege,USA.south,$ 38000,High
Fouryearscollege,USA.middle,$ 32000,High
twoyearscollege,USA.middle,$ 30400,High
Graduate school,China.south,$ 38000,High
Elementary school,Cuba.north,$ 990,Low
High school,India.east,$ 7839,Low
Fouryearscollege,China.east,$ 30000,Medium
Graduate school,China.west,$ 38000,High
Junior High,China.south,$ 3800,Low
Twoyearscollege,India.south,$ 20000,Medium
Fouryearscollege,USA.west,$ 20000,Medium
Graduate school,China.west,$ 38000,High
Ph. D,India.south,$ 50000,High
";

pub const TABLE1_SCHEMA: &str = "\
avg_edu_level:nominal
region:nominal
family_income_per_year:numeric
income_level:nominal:class
";

pub const TABLE3_CSV: &str = "\
avg_edu_level,country,income_level
Illiterate,Cuba,Low
Fouryearscollege,USA,Medium
Fouryearscollege,USA,High
Fouryearscollege,USA,High
Twoyearscollege,USA,High
Graduate school,China,High
Elementary school,Cuba,Low
High school,India,Low
Fouryearscollege,China,Medium
Graduate school,China,High
Junior High,China,Low
Twoyearscollege,India,Medium
Fouryearscollege,USA,Medium
Graduate school,China,High
Ph. D,India,High
Illiterate,Cuba,Low
Twoyearscollege,India,Medium
";

pub const TABLE3_SCHEMA: &str = "\
avg_edu_level:nominal
country:nominal
income_level:nominal:class
";

/// Region hierarchy: region -> country -> world.
pub const REGION_HIERARCHY: &str = "\
attribute: region
levels: region, country, world
India.east -> India
India.west -> India
India.south -> India
USA.east -> USA
USA.west -> USA
USA.south -> USA
USA.middle -> USA
Cuba.north -> Cuba
Cuba.south -> Cuba
China.south -> China
China.east -> China
China.west -> China
India -> World
USA -> World
Cuba -> World
China -> World
";

/// Generalization query: region data rolled up to countries.
pub const EXAMPLE_2_1: &str = r#"Classify Region_Data till World_Data replace {USA,Cuba,India,China} attribute_values
with new_attribute Country
in relevance to avg_edu_level,country new_attribute count
from edu_dataset
where Country_Data={"India","USA","Cuba","China"}
and Region_Data={"India.east","India.west","India.south",
 "USA.east","USA.west","USA.south","USA.middle","Cuba.north",
 "Cuba.south","China.south","China.east","China.west"}
"#;

/// Classification query with a single priority attribute.
pub const EXAMPLE_4_1: &str = "\
Classify Decision_Tree
according to priority{country(India,USA,China,Cuba) attribute values}
in relevance to income_level
where attribute values for income_level count //leaf node(s)
from edu_dataset
";

/// Classification query with two priority levels.
pub const EXAMPLE_5_1: &str = r#"Classify Decision_Tree
according to priority1 {country(India,USA,China,Cuba)
attribute values}
according to priority2 {region("India.east", "India.west",
"India.south", "USA.east", "USA.west", "USA.south",
"USA.middle", "Cuba.north", "Cuba.south",
"China.south", "China.east", "China.west") attribute values}
in relevance to fam_inc_pyear
with attribute values for region count //leaf node(s)
from edu_dataset
"#;

/// The 15-row region-level training relation.
pub fn table1() -> Dataset {
    load_dataset(TABLE1_CSV, parse_schema(TABLE1_SCHEMA).unwrap()).unwrap()
}

/// The canonical 17-tuple edu_dataset.
pub fn table3() -> Dataset {
    load_dataset(TABLE3_CSV, parse_schema(TABLE3_SCHEMA).unwrap()).unwrap()
}

pub fn region_hierarchy() -> ConceptHierarchy {
    load_hierarchy(REGION_HIERARCHY).unwrap()
}
