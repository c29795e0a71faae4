use std::fs;
use std::path::Path;

use kpsum::corpus::{self, attach_catch_all, catch_all_id, load_argkp, load_debate, split_sentences, Corpus};
use kpsum::Error;

fn write(dir: &Path, name: &str, content: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

fn argkp(dir: &Path, args: &str, kps: &str, labels: &str) -> Result<Corpus, Error> {
    let a = write(dir, "arguments.csv", args);
    let k = write(dir, "key_points.csv", kps);
    let l = write(dir, "labels.csv", labels);
    load_argkp(&a, &k, &l)
}

const ARGS: &str = "\
arg_id,argument,topic,stance
a1,\"Vaccines save lives, many of them.\",We should subsidize vaccination,1
a2,\"It is cheap.
And it works.\",We should subsidize vaccination,1
a3,It costs too much,We should subsidize vaccination,-1
b1,Guns kill,We should ban guns,1
";

const KPS: &str = "\
key_point_id,key_point,topic,stance
k1,Vaccination saves lives,We should subsidize vaccination,1
k2,Vaccination is cheap,We should subsidize vaccination,1
k3,Guns are deadly,We should ban guns,1
";

const LABELS: &str = "\
arg_id,key_point_id,label
a1,k1,1
a2,k2,1
a2,k1,0
a3,k1,0
b1,k3,1
";

#[test]
fn argkp_quoted_fields_and_topic_ids() {
    let dir = tempfile::tempdir().unwrap();
    let c = argkp(dir.path(), ARGS, KPS, LABELS).unwrap();
    assert_eq!(c.arguments().len(), 4);
    // topics are numbered in lexicographic order of their statements
    assert_eq!(c.topic("t0").unwrap().text, "We should ban guns");
    assert_eq!(c.topic("t1").unwrap().text, "We should subsidize vaccination");
    let a1 = c.argument("a1").unwrap();
    assert_eq!(a1.text, "Vaccines save lives, many of them.");
    assert_eq!(a1.topic_id, "t1");
    assert_eq!(a1.stance, Some(1));
    assert_eq!(c.argument("a2").unwrap().text, "It is cheap.\nAnd it works.");
    assert_eq!(c.argument("a3").unwrap().stance, Some(-1));
    assert!(c.gold_key_points("a3").is_none());
    assert_eq!(c.gold_key_points("a2").unwrap().iter().collect::<Vec<_>>(), ["k2"]);
}

#[test]
fn argkp_topic_ids_ignore_row_order() {
    let dir = tempfile::tempdir().unwrap();
    let reordered = "\
arg_id,argument,topic,stance
b1,Guns kill,We should ban guns,1
a3,It costs too much,We should subsidize vaccination,-1
a2,\"It is cheap.
And it works.\",We should subsidize vaccination,1
a1,\"Vaccines save lives, many of them.\",We should subsidize vaccination,1
";
    let forward = argkp(dir.path(), ARGS, KPS, LABELS).unwrap();
    let backward = argkp(dir.path(), reordered, KPS, LABELS).unwrap();
    for a in forward.arguments() {
        assert_eq!(backward.argument(&a.id).unwrap().topic_id, a.topic_id);
    }
}

#[test]
fn argkp_empty_arguments_is_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let err = argkp(dir.path(), "arg_id,argument,topic,stance\n", KPS, LABELS).unwrap_err();
    assert!(matches!(err, Error::EmptyCorpus));
    assert_eq!(err.to_string(), "empty corpus");
}

#[test]
fn argkp_unknown_ids_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let labels = "arg_id,key_point_id,label\na1,k1,1\nzz,k1,1\n";
    let err = argkp(dir.path(), ARGS, KPS, labels).unwrap_err();
    assert!(matches!(err, Error::Integrity(_)));
    let msg = err.to_string();
    assert!(msg.contains("labels.csv:3") && msg.contains("zz"), "{msg}");

    let labels = "arg_id,key_point_id,label\na1,k9,1\n";
    let msg = argkp(dir.path(), ARGS, KPS, labels).unwrap_err().to_string();
    assert!(msg.contains("k9"), "{msg}");
}

#[test]
fn argkp_bad_label_and_stance_values() {
    let dir = tempfile::tempdir().unwrap();
    let labels = "arg_id,key_point_id,label\na1,k1,yes\n";
    assert!(matches!(argkp(dir.path(), ARGS, KPS, labels), Err(Error::Parse { line: 2, .. })));
    let args = "arg_id,argument,topic,stance\na1,text,T,0\n";
    assert!(matches!(argkp(dir.path(), args, "key_point_id,key_point,topic,stance\n", "arg_id,key_point_id,label\n"), Err(Error::Parse { .. })));
}

#[test]
fn argkp_cross_topic_label_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let labels = "arg_id,key_point_id,label\nb1,k1,1\n";
    assert!(matches!(argkp(dir.path(), ARGS, KPS, labels), Err(Error::Integrity(_))));
}

#[test]
fn argkp_missing_file_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.csv");
    let err = load_argkp(&missing, &missing, &missing).unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
}

#[test]
fn argkp_write_then_load_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let c = argkp(dir.path(), ARGS, KPS, LABELS).unwrap();
    let with_catch_all = attach_catch_all(&c).unwrap();
    let out = dir.path().join("out");
    fs::create_dir(&out).unwrap();
    let (a, k, l) = (out.join("a.csv"), out.join("k.csv"), out.join("l.csv"));
    corpus::write_argkp(&with_catch_all, &a, &k, &l).unwrap();
    let back = load_argkp(&a, &k, &l).unwrap();
    assert_eq!(back, c);
}

#[test]
fn debate_aspects_become_key_points() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "debate.csv",
        "arg_id,argument,topic,aspect\n\
         d1,Taxes fund schools,Taxes,education\n\
         d2,Taxes hurt growth,Taxes,economy\n\
         d3,\"Schools, roads\",Taxes,education\n\
         d4,Random remark,Taxes,\n\
         e1,Wind is clean,Energy,environment\n",
    );
    let c = load_debate(&file).unwrap();
    let ids: Vec<(&str, &str)> = c.key_points().iter().map(|k| (k.id.as_str(), k.text.as_str())).collect();
    assert_eq!(ids, [("kp0", "education"), ("kp1", "economy"), ("kp2", "environment")]);
    assert_eq!(c.gold_key_points("d3").unwrap().iter().next().unwrap(), "kp0");
    assert!(c.gold_key_points("d4").is_none());
    assert_eq!(c.argument("e1").unwrap().topic_id, "t0");

    let with_catch_all = attach_catch_all(&c).unwrap();
    let none = catch_all_id("t1");
    assert!(with_catch_all.gold_key_points("d4").unwrap().contains(&none));
    assert!(with_catch_all.key_point(&none).unwrap().is_catch_all);
}

#[test]
fn debate_empty_file_is_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "debate.csv", "arg_id,argument,topic,aspect\n");
    let err = load_debate(&file).unwrap_err();
    assert_eq!(err.to_string(), "empty corpus");
}

#[test]
fn debate_duplicate_ids_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "debate.csv", "arg_id,argument,topic,aspect\nd1,x,T,a\nd1,y,T,a\n");
    assert!(matches!(load_debate(&file), Err(Error::Integrity(_))));
}

#[test]
fn sentence_split_copies_labels_and_keeps_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let c = argkp(dir.path(), ARGS, KPS, LABELS).unwrap();
    let split = split_sentences(&c).unwrap();
    assert!(split.argument("a2").is_none());
    let s0 = split.argument("a2__s0").unwrap();
    let s1 = split.argument("a2__s1").unwrap();
    assert_eq!((s0.text.as_str(), s1.text.as_str()), ("It is cheap.", "And it works."));
    assert_eq!(s1.parent_id.as_deref(), Some("a2"));
    assert_eq!(s1.sentence_index, Some(1));
    assert_eq!(split.gold_key_points("a2__s1").unwrap().iter().next().unwrap(), "k2");
    assert_eq!(split.arguments().len(), c.arguments().len() + 1);
}

#[test]
fn json_corpus_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let c = attach_catch_all(&argkp(dir.path(), ARGS, KPS, LABELS).unwrap()).unwrap();
    let path = dir.path().join("corpus.json");
    corpus::save_json(&c, &path).unwrap();
    assert_eq!(corpus::load_json(&path).unwrap(), c);
}
