//! The modified-DMQL classification-task language: lexer, parser, and
//! executor.

pub mod exec;
pub mod lexer;
pub mod parser;

pub use exec::{execute, Catalog, CatalogEntry, ExecDefaults, QueryOutput, QueryResult};
pub use lexer::{tokenize, Keyword, Token, TokenKind};
pub use parser::{parse, pretty_print, DmqlQuery, PriorityClause, ReplaceClause, Task};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::samples;

    #[test]
    fn example_2_1_parses_to_a_generalize_task() {
        let q = parse(samples::EXAMPLE_2_1).unwrap();
        assert_eq!(q.task, Task::Generalize);
        assert_eq!(q.subject, "Region_Data");
        assert_eq!(q.source_dataset, "edu_dataset");
        let r = q.replace_clause.as_ref().unwrap();
        assert_eq!(r.from_level, "Region_Data");
        assert_eq!(r.to_level, "World_Data");
        assert_eq!(r.new_attribute, "Country");
        assert_eq!(r.target_values, vec!["USA", "Cuba", "India", "China"]);
        assert_eq!(q.relevance, vec!["avg_edu_level", "country"]);
        assert_eq!(q.count_column.as_deref(), Some("count"));
        assert_eq!(q.bindings.len(), 2);
        assert_eq!(q.bindings[0].0, "Country_Data");
        assert_eq!(q.bindings[1].1.len(), 12);
    }

    #[test]
    fn example_4_1_parses_to_a_classification_task() {
        let q = parse(samples::EXAMPLE_4_1).unwrap();
        assert_eq!(q.task, Task::ClassifyTree);
        assert_eq!(q.source_dataset, "edu_dataset");
        assert_eq!(q.priorities.len(), 1);
        assert_eq!(q.priorities[0].rank, 1);
        assert_eq!(q.priorities[0].attribute, "country");
        assert_eq!(
            q.priorities[0].value_order,
            vec!["India", "USA", "China", "Cuba"]
        );
        assert_eq!(q.relevance, vec!["income_level"]);
        assert_eq!(q.leaf_count_attr.as_deref(), Some("income_level"));
    }

    #[test]
    fn example_5_1_parses_two_priority_levels() {
        let q = parse(samples::EXAMPLE_5_1).unwrap();
        assert_eq!(q.task, Task::ClassifyTree);
        assert_eq!(q.priorities.len(), 2);
        assert_eq!(q.priorities[0].rank, 1);
        assert_eq!(q.priorities[0].attribute, "country");
        assert_eq!(q.priorities[1].rank, 2);
        assert_eq!(q.priorities[1].attribute, "region");
        assert_eq!(q.priorities[1].value_order.len(), 12);
        assert_eq!(q.relevance, vec!["fam_inc_pyear"]);
        assert_eq!(q.leaf_count_attr.as_deref(), Some("region"));
    }

    #[test]
    fn parse_pretty_print_parse_is_a_fixpoint() {
        for text in [
            samples::EXAMPLE_2_1,
            samples::EXAMPLE_4_1,
            samples::EXAMPLE_5_1,
        ] {
            let once = parse(text).unwrap();
            let twice = parse(&pretty_print(&once)).unwrap();
            assert_eq!(once, twice);
            let thrice = parse(&pretty_print(&twice)).unwrap();
            assert_eq!(twice, thrice);
        }
    }

    #[test]
    fn retokenizing_joined_lexemes_is_stable() {
        for text in [samples::EXAMPLE_4_1, samples::EXAMPLE_5_1] {
            let toks = tokenize(text).unwrap();
            let joined: String = toks
                .iter()
                .map(|t| match t.kind {
                    TokenKind::Str => format!("\"{}\"", t.lexeme),
                    _ => t.lexeme.clone(),
                })
                .collect::<Vec<_>>()
                .join(" ");
            let again = tokenize(&joined).unwrap();
            let kinds: Vec<&TokenKind> = toks.iter().map(|t| &t.kind).collect();
            let kinds2: Vec<&TokenKind> = again.iter().map(|t| &t.kind).collect();
            assert_eq!(kinds, kinds2);
        }
    }

    #[test]
    fn missing_dataset_name_is_a_positioned_error() {
        let err = parse("classify T in relevance to c from").unwrap_err();
        assert!(matches!(err, Error::Syntax { .. }));
    }

    #[test]
    fn dropped_from_clause_is_an_error() {
        let err = parse("classify T in relevance to c").unwrap_err();
        match err {
            Error::Syntax { message, .. } => assert!(message.contains("from")),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn duplicate_priority_rank_is_an_error() {
        let text = "classify T \
            according to priority1 {a(x,y) attribute values} \
            according to priority1 {b(p,q) attribute values} \
            in relevance to c from d";
        assert!(matches!(parse(text), Err(Error::Syntax { .. })));
    }

    #[test]
    fn unbalanced_brace_is_an_error() {
        let text = "classify T according to priority {a(x,y attribute values} in relevance to c from d";
        assert!(matches!(parse(text), Err(Error::Syntax { .. })));
    }

    #[test]
    fn unknown_keyword_is_an_error() {
        let text = "classify T frobnicate in relevance to c from d";
        assert!(matches!(parse(text), Err(Error::Syntax { .. })));
    }

    #[test]
    fn executing_example_4_1_roots_the_tree_at_country() {
        let mut catalog = Catalog::new();
        catalog.insert(
            "edu_dataset",
            CatalogEntry {
                dataset: samples::table3(),
                hierarchies: vec![],
            },
        );
        let q = parse(samples::EXAMPLE_4_1).unwrap();
        let result = execute(&q, &catalog, &ExecDefaults::default()).unwrap();
        let QueryOutput::Classified { tree, rules, report, .. } = result.output else {
            panic!("expected a classification result");
        };
        match &tree.root {
            crate::induction::DecisionNode::Internal { test_attribute, .. } => {
                assert_eq!(test_attribute, "country");
            }
            _ => panic!("expected internal root"),
        }
        assert!(rules.len() >= 4);
        assert!(report.requested[0].covered_in_b);
        assert!(!report.requested[0].covered_in_a);
    }

    #[test]
    fn executing_example_2_1_generalizes_table1() {
        let mut catalog = Catalog::new();
        catalog.insert(
            "edu_dataset",
            CatalogEntry {
                dataset: samples::table1(),
                hierarchies: vec![samples::region_hierarchy()],
            },
        );
        let q = parse(samples::EXAMPLE_2_1).unwrap();
        let defaults = ExecDefaults::default().with_sum("family_income_per_year");
        let result = execute(&q, &catalog, &defaults).unwrap();
        let QueryOutput::Generalized(d) = result.output else {
            panic!("expected a generalized dataset");
        };
        assert_eq!(d.total_count(), 15);
        let country = d.attr_index("Country").unwrap();
        let mut names: Vec<String> = d
            .distinct_values(country)
            .into_iter()
            .map(|(k, _)| k)
            .collect();
        names.sort();
        assert_eq!(names, ["china", "cuba", "india", "usa"]);
    }

    #[test]
    fn unknown_dataset_is_an_execution_error() {
        let catalog = Catalog::new();
        let q = parse(samples::EXAMPLE_4_1).unwrap();
        assert!(matches!(
            execute(&q, &catalog, &ExecDefaults::default()),
            Err(Error::UnknownDataset(_))
        ));
    }

    #[test]
    fn unlisted_priority_value_is_a_warning_not_an_error() {
        let mut catalog = Catalog::new();
        catalog.insert(
            "edu_dataset",
            CatalogEntry {
                dataset: samples::table3(),
                hierarchies: vec![],
            },
        );
        let text = "classify Decision_Tree \
            according to priority {country(India,USA,China,Cuba,Peru) attribute values} \
            in relevance to income_level from edu_dataset";
        let q = parse(text).unwrap();
        let result = execute(&q, &catalog, &ExecDefaults::default()).unwrap();
        assert!(result.warnings.iter().any(|w| w.contains("Peru")));
    }
}
