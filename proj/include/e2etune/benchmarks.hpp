#pragma once

#include <string>
#include <vector>

#include "e2etune/error.hpp"
#include "e2etune/schema.hpp"

// Bundled desk-scale database instances: five analytical and five
// transactional families modelled loosely on the usual public benchmarks.
namespace e2etune {

namespace detail {

inline ColumnDef col(std::string name, std::string type, std::vector<std::string> samples = {}) {
  return ColumnDef{std::move(name), std::move(type), std::move(samples)};
}

inline std::vector<std::string> ints(std::initializer_list<int> v) {
  std::vector<std::string> out;
  for (int x : v) out.push_back(std::to_string(x));
  return out;
}

inline BenchmarkInstance tpch_family() {
  BenchmarkInstance b;
  b.name = "tpch_s";
  b.kind = WorkloadKind::olap;
  b.tables = {
      {"region", 5, {col("r_regionkey", "INTEGER", ints({0, 1, 2, 3, 4})), col("r_name", "CHAR(25)", {"'ASIA'", "'EUROPE'", "'AMERICA'"})}, {"r_regionkey"}, {}},
      {"nation", 25, {col("n_nationkey", "INTEGER", ints({1, 7, 12})), col("n_name", "CHAR(25)", {"'FRANCE'", "'GERMANY'", "'JAPAN'"}), col("n_regionkey", "INTEGER")}, {"n_nationkey"}, {{"n_regionkey", "region", "r_regionkey"}}},
      {"supplier", 10000, {col("s_suppkey", "INTEGER"), col("s_name", "CHAR(25)"), col("s_nationkey", "INTEGER"), col("s_acctbal", "DECIMAL", {"1000.00", "5000.00"})}, {"s_suppkey"}, {{"s_nationkey", "nation", "n_nationkey"}}},
      {"customer", 150000, {col("c_custkey", "INTEGER"), col("c_name", "VARCHAR(25)"), col("c_nationkey", "INTEGER"), col("c_mktsegment", "CHAR(10)", {"'BUILDING'", "'MACHINERY'", "'AUTOMOBILE'"})}, {"c_custkey"}, {{"c_nationkey", "nation", "n_nationkey"}}},
      {"part", 200000, {col("p_partkey", "INTEGER"), col("p_brand", "CHAR(10)", {"'Brand#12'", "'Brand#23'"}), col("p_type", "VARCHAR(25)", {"'ECONOMY ANODIZED STEEL'", "'PROMO BRUSHED COPPER'"}), col("p_size", "INTEGER", ints({5, 15, 45}))}, {"p_partkey"}, {}},
      {"partsupp", 800000, {col("ps_partkey", "INTEGER"), col("ps_suppkey", "INTEGER"), col("ps_supplycost", "DECIMAL"), col("ps_availqty", "INTEGER", ints({100, 5000}))}, {"ps_partkey", "ps_suppkey"}, {{"ps_partkey", "part", "p_partkey"}, {"ps_suppkey", "supplier", "s_suppkey"}}},
      {"orders", 1500000, {col("o_orderkey", "INTEGER"), col("o_custkey", "INTEGER"), col("o_orderdate", "DATE", {"'1995-03-15'", "'1996-01-01'"}), col("o_orderpriority", "CHAR(15)", {"'1-URGENT'", "'3-MEDIUM'"}), col("o_totalprice", "DECIMAL")}, {"o_orderkey"}, {{"o_custkey", "customer", "c_custkey"}}},
      {"lineitem", 6000000, {col("l_orderkey", "INTEGER"), col("l_partkey", "INTEGER"), col("l_suppkey", "INTEGER"), col("l_quantity", "DECIMAL", ints({10, 24, 40})), col("l_extendedprice", "DECIMAL"), col("l_discount", "DECIMAL", {"0.05", "0.07"}), col("l_shipdate", "DATE", {"'1994-01-01'", "'1998-09-02'"}), col("l_returnflag", "CHAR(1)", {"'R'", "'N'"})}, {"l_orderkey"}, {{"l_orderkey", "orders", "o_orderkey"}, {"l_partkey", "part", "p_partkey"}}},
  };
  const std::vector<std::string> dates = {"'1994-01-01'", "'1995-01-01'", "'1995-06-01'", "'1996-01-01'", "'1997-01-01'"};
  b.query_templates = {
      {"SELECT l_returnflag, SUM(l_quantity), AVG(l_extendedprice) FROM lineitem WHERE l_shipdate <= {date} AND l_discount < {disc} GROUP BY l_returnflag ORDER BY l_returnflag",
       {{"date", dates}, {"disc", {"0.02", "0.04", "0.06", "0.08", "0.10"}}}},
      {"SELECT o_orderpriority, COUNT(*) FROM orders WHERE o_orderdate >= {date} AND o_totalprice > {price} GROUP BY o_orderpriority ORDER BY o_orderpriority",
       {{"date", dates}, {"price", ints({1000, 5000, 20000, 100000, 250000})}}},
      {"SELECT c_name, SUM(l_extendedprice * (1 - l_discount)) AS revenue FROM customer JOIN orders ON c_custkey = o_custkey JOIN lineitem ON l_orderkey = o_orderkey WHERE c_mktsegment = {seg} AND o_orderdate < {date} GROUP BY c_name ORDER BY revenue DESC LIMIT 10",
       {{"seg", {"'BUILDING'", "'MACHINERY'", "'AUTOMOBILE'", "'FURNITURE'", "'HOUSEHOLD'"}}, {"date", dates}}},
      {"SELECT n_name, SUM(l_extendedprice) FROM lineitem, supplier, nation, region WHERE l_suppkey = s_suppkey AND s_nationkey = n_nationkey AND n_regionkey = r_regionkey AND r_name = {region} AND l_quantity > {qty} GROUP BY n_name",
       {{"region", {"'ASIA'", "'EUROPE'", "'AMERICA'", "'AFRICA'", "'MIDDLE EAST'"}}, {"qty", ints({5, 10, 20, 30, 45})}}},
      {"SELECT p_brand, p_type, COUNT(ps_suppkey) FROM partsupp JOIN part ON p_partkey = ps_partkey WHERE p_size IN ({size}, 49) AND ps_availqty > {avail} GROUP BY p_brand, p_type",
       {{"size", ints({3, 9, 14, 23, 36})}, {"avail", ints({100, 500, 1000, 5000, 9000})}}},
  };
  return b;
}

inline BenchmarkInstance ssb_family() {
  BenchmarkInstance b;
  b.name = "ssb_s";
  b.kind = WorkloadKind::olap;
  b.tables = {
      {"dates", 2556, {col("d_datekey", "INTEGER"), col("d_year", "INTEGER", ints({1993, 1997})), col("d_yearmonthnum", "INTEGER", ints({199401, 199712}))}, {"d_datekey"}, {}},
      {"customer", 30000, {col("c_custkey", "INTEGER"), col("c_city", "CHAR(10)", {"'UNITED KI1'"}), col("c_region", "CHAR(12)", {"'ASIA'", "'AMERICA'"})}, {"c_custkey"}, {}},
      {"supplier", 2000, {col("s_suppkey", "INTEGER"), col("s_region", "CHAR(12)", {"'ASIA'", "'EUROPE'"}), col("s_nation", "CHAR(15)", {"'CHINA'"})}, {"s_suppkey"}, {}},
      {"part", 200000, {col("p_partkey", "INTEGER"), col("p_category", "CHAR(7)", {"'MFGR#12'", "'MFGR#14'"}), col("p_brand1", "CHAR(9)", {"'MFGR#2221'"})}, {"p_partkey"}, {}},
      {"lineorder", 6000000, {col("lo_orderkey", "INTEGER"), col("lo_custkey", "INTEGER"), col("lo_partkey", "INTEGER"), col("lo_suppkey", "INTEGER"), col("lo_orderdate", "INTEGER"), col("lo_discount", "INTEGER", ints({1, 3})), col("lo_quantity", "INTEGER", ints({25, 35})), col("lo_revenue", "INTEGER"), col("lo_extendedprice", "INTEGER")}, {"lo_orderkey"}, {{"lo_custkey", "customer", "c_custkey"}, {"lo_partkey", "part", "p_partkey"}, {"lo_suppkey", "supplier", "s_suppkey"}, {"lo_orderdate", "dates", "d_datekey"}}},
  };
  b.query_templates = {
      {"SELECT SUM(lo_extendedprice * lo_discount) AS revenue FROM lineorder JOIN dates ON lo_orderdate = d_datekey WHERE d_year = {year} AND lo_discount BETWEEN 1 AND {disc} AND lo_quantity < 25",
       {{"year", ints({1993, 1994, 1995, 1996, 1997})}, {"disc", ints({2, 3, 4, 5, 6})}}},
      {"SELECT d_year, p_brand1, SUM(lo_revenue) FROM lineorder, dates, part, supplier WHERE lo_orderdate = d_datekey AND lo_partkey = p_partkey AND lo_suppkey = s_suppkey AND p_category = {cat} AND s_region = {region} GROUP BY d_year, p_brand1 ORDER BY d_year, p_brand1",
       {{"cat", {"'MFGR#11'", "'MFGR#12'", "'MFGR#13'", "'MFGR#14'", "'MFGR#15'"}}, {"region", {"'ASIA'", "'EUROPE'", "'AMERICA'", "'AFRICA'", "'MIDDLE EAST'"}}}},
      {"SELECT c_region, s_region, d_year, SUM(lo_revenue) FROM customer JOIN lineorder ON lo_custkey = c_custkey JOIN supplier ON lo_suppkey = s_suppkey JOIN dates ON lo_orderdate = d_datekey WHERE c_region = {region} AND d_year >= {year} GROUP BY c_region, s_region, d_year",
       {{"region", {"'ASIA'", "'EUROPE'", "'AMERICA'", "'AFRICA'", "'MIDDLE EAST'"}}, {"year", ints({1992, 1993, 1994, 1995, 1996})}}},
      {"SELECT lo_orderkey, lo_revenue FROM lineorder WHERE lo_quantity > {qty} AND lo_discount = {disc} ORDER BY lo_revenue DESC LIMIT 100",
       {{"qty", ints({10, 20, 30, 40, 48})}, {"disc", ints({0, 2, 4, 6, 8})}}},
      {"SELECT p_category, COUNT(*) FROM part JOIN lineorder ON lo_partkey = p_partkey WHERE p_brand1 LIKE {brand} AND lo_orderdate > {date} GROUP BY p_category",
       {{"brand", {"'MFGR#22%'", "'MFGR#13%'", "'MFGR#31%'", "'MFGR#44%'", "'MFGR#52%'"}}, {"date", ints({19930101, 19940101, 19950101, 19960101, 19970101})}}},
  };
  return b;
}

inline BenchmarkInstance job_family() {
  BenchmarkInstance b;
  b.name = "job_s";
  b.kind = WorkloadKind::olap;
  b.tables = {
      {"title", 2500000, {col("id", "INTEGER"), col("title", "TEXT"), col("production_year", "INTEGER", ints({1990, 2005})), col("kind_id", "INTEGER", ints({1, 7}))}, {"id"}, {}},
      {"cast_info", 36000000, {col("id", "INTEGER"), col("person_id", "INTEGER"), col("movie_id", "INTEGER"), col("role_id", "INTEGER", ints({1, 2}))}, {"id"}, {{"movie_id", "title", "id"}}},
      {"name", 4100000, {col("id", "INTEGER"), col("name", "TEXT"), col("gender", "CHAR(1)", {"'f'", "'m'"})}, {"id"}, {}},
      {"movie_companies", 2600000, {col("id", "INTEGER"), col("movie_id", "INTEGER"), col("company_id", "INTEGER"), col("note", "TEXT", {"'(USA)'"})}, {"id"}, {{"movie_id", "title", "id"}}},
      {"company_name", 235000, {col("id", "INTEGER"), col("name", "TEXT"), col("country_code", "TEXT", {"'[us]'", "'[de]'"})}, {"id"}, {}},
      {"keyword", 134000, {col("id", "INTEGER"), col("keyword", "TEXT", {"'sequel'", "'murder'"})}, {"id"}, {}},
      {"movie_keyword", 4500000, {col("id", "INTEGER"), col("movie_id", "INTEGER"), col("keyword_id", "INTEGER")}, {"id"}, {{"movie_id", "title", "id"}, {"keyword_id", "keyword", "id"}}},
  };
  b.query_templates = {
      {"SELECT MIN(t.title) FROM title t JOIN movie_keyword mk ON mk.movie_id = t.id JOIN keyword k ON k.id = mk.keyword_id WHERE k.keyword = {kw} AND t.production_year > {year}",
       {{"kw", {"'sequel'", "'murder'", "'superhero'", "'love'", "'revenge'"}}, {"year", ints({1980, 1990, 2000, 2005, 2010})}}},
      {"SELECT MIN(n.name), MIN(t.title) FROM cast_info ci JOIN name n ON n.id = ci.person_id JOIN title t ON t.id = ci.movie_id WHERE n.gender = {g} AND ci.role_id = {role}",
       {{"g", {"'f'", "'m'", "'f'", "'m'", "'f'"}}, {"role", ints({1, 2, 3, 4, 10})}}},
      {"SELECT MIN(cn.name) FROM company_name cn JOIN movie_companies mc ON mc.company_id = cn.id JOIN title t ON t.id = mc.movie_id WHERE cn.country_code = {cc} AND t.kind_id = {kind}",
       {{"cc", {"'[us]'", "'[de]'", "'[gb]'", "'[fr]'", "'[jp]'"}}, {"kind", ints({1, 2, 3, 4, 7})}}},
      {"SELECT t.production_year, COUNT(*) FROM title t JOIN movie_companies mc ON mc.movie_id = t.id WHERE mc.note LIKE {note} AND t.production_year BETWEEN {year} AND 2012 GROUP BY t.production_year ORDER BY t.production_year",
       {{"note", {"'%(USA)%'", "'%(worldwide)%'", "'%(TV)%'", "'%(VHS)%'", "'%(co-production)%'"}}, {"year", ints({1950, 1970, 1990, 2000, 2008})}}},
      {"SELECT MIN(t.title) FROM title t, cast_info ci, movie_keyword mk, keyword k WHERE t.id = ci.movie_id AND t.id = mk.movie_id AND mk.keyword_id = k.id AND k.keyword LIKE {kw} AND ci.role_id = {role}",
       {{"kw", {"'%sequel%'", "'%murder%'", "'%hero%'", "'%based-on%'", "'%war%'"}}, {"role", ints({1, 2, 3, 4, 8})}}},
  };
  return b;
}

inline BenchmarkInstance tpcds_family() {
  BenchmarkInstance b;
  b.name = "tpcds_s";
  b.kind = WorkloadKind::olap;
  b.tables = {
      {"date_dim", 73049, {col("d_date_sk", "INTEGER"), col("d_year", "INTEGER", ints({1999, 2001})), col("d_moy", "INTEGER", ints({1, 11}))}, {"d_date_sk"}, {}},
      {"item", 18000, {col("i_item_sk", "INTEGER"), col("i_category", "CHAR(50)", {"'Music'", "'Books'"}), col("i_brand", "CHAR(50)"), col("i_current_price", "DECIMAL", ints({10, 60}))}, {"i_item_sk"}, {}},
      {"store", 12, {col("s_store_sk", "INTEGER"), col("s_state", "CHAR(2)", {"'TN'", "'CA'"})}, {"s_store_sk"}, {}},
      {"customer", 100000, {col("c_customer_sk", "INTEGER"), col("c_birth_year", "INTEGER", ints({1950, 1980}))}, {"c_customer_sk"}, {}},
      {"store_sales", 2880000, {col("ss_sold_date_sk", "INTEGER"), col("ss_item_sk", "INTEGER"), col("ss_store_sk", "INTEGER"), col("ss_customer_sk", "INTEGER"), col("ss_quantity", "INTEGER", ints({1, 50})), col("ss_sales_price", "DECIMAL"), col("ss_net_profit", "DECIMAL")}, {"ss_item_sk"}, {{"ss_item_sk", "item", "i_item_sk"}, {"ss_store_sk", "store", "s_store_sk"}, {"ss_sold_date_sk", "date_dim", "d_date_sk"}}},
      {"web_sales", 720000, {col("ws_sold_date_sk", "INTEGER"), col("ws_item_sk", "INTEGER"), col("ws_quantity", "INTEGER"), col("ws_net_paid", "DECIMAL")}, {"ws_item_sk"}, {{"ws_item_sk", "item", "i_item_sk"}}},
  };
  b.query_templates = {
      {"SELECT i_category, SUM(ss_sales_price) FROM store_sales JOIN item ON ss_item_sk = i_item_sk JOIN date_dim ON ss_sold_date_sk = d_date_sk WHERE d_year = {year} AND d_moy = {moy} GROUP BY i_category ORDER BY i_category",
       {{"year", ints({1998, 1999, 2000, 2001, 2002})}, {"moy", ints({1, 3, 6, 9, 12})}}},
      {"SELECT s_state, AVG(ss_quantity), AVG(ss_net_profit) FROM store_sales, store, date_dim WHERE ss_store_sk = s_store_sk AND ss_sold_date_sk = d_date_sk AND s_state IN ({state}, 'GA') AND d_year >= {year} GROUP BY s_state",
       {{"state", {"'TN'", "'CA'", "'TX'", "'NY'", "'WA'"}}, {"year", ints({1998, 1999, 2000, 2001, 2002})}}},
      {"SELECT i_brand, SUM(ws_net_paid) FROM web_sales JOIN item ON ws_item_sk = i_item_sk WHERE i_current_price BETWEEN {lo} AND 100 AND i_category = {cat} GROUP BY i_brand ORDER BY 2 DESC LIMIT 100",
       {{"lo", ints({5, 10, 20, 40, 60})}, {"cat", {"'Music'", "'Books'", "'Home'", "'Sports'", "'Jewelry'"}}}},
      {"SELECT c_birth_year, COUNT(*) FROM customer JOIN store_sales ON ss_customer_sk = c_customer_sk WHERE c_birth_year > {by} AND ss_quantity > {qty} GROUP BY c_birth_year",
       {{"by", ints({1930, 1945, 1960, 1975, 1985})}, {"qty", ints({5, 10, 20, 40, 80})}}},
      {"SELECT ss_item_sk, ss_net_profit FROM store_sales WHERE ss_quantity BETWEEN {lo} AND 100 AND ss_sales_price > {price} ORDER BY ss_net_profit LIMIT 50",
       {{"lo", ints({1, 21, 41, 61, 81})}, {"price", ints({10, 50, 100, 150, 190})}}},
  };
  return b;
}

inline BenchmarkInstance stack_family() {
  BenchmarkInstance b;
  b.name = "stack_s";
  b.kind = WorkloadKind::olap;
  b.tables = {
      {"users", 1200000, {col("id", "INTEGER"), col("reputation", "INTEGER", ints({1, 1000, 50000})), col("location", "TEXT", {"'Berlin'", "'India'"})}, {"id"}, {}},
      {"posts", 5400000, {col("id", "INTEGER"), col("owner_user_id", "INTEGER"), col("post_type_id", "INTEGER", ints({1, 2})), col("score", "INTEGER", ints({0, 10})), col("answer_count", "INTEGER", ints({0, 3})), col("creation_date", "DATE", {"'2015-01-01'"})}, {"id"}, {{"owner_user_id", "users", "id"}}},
      {"comments", 8200000, {col("id", "INTEGER"), col("post_id", "INTEGER"), col("user_id", "INTEGER"), col("score", "INTEGER", ints({0, 5}))}, {"id"}, {{"post_id", "posts", "id"}}},
      {"votes", 12000000, {col("id", "INTEGER"), col("post_id", "INTEGER"), col("vote_type_id", "INTEGER", ints({2, 3}))}, {"id"}, {{"post_id", "posts", "id"}}},
      {"badges", 2100000, {col("id", "INTEGER"), col("user_id", "INTEGER"), col("name", "TEXT", {"'Teacher'", "'Editor'"})}, {"id"}, {{"user_id", "users", "id"}}},
      {"tags", 60000, {col("id", "INTEGER"), col("tag_name", "TEXT", {"'c++'", "'sql'"}), col("count", "INTEGER")}, {"id"}, {}},
  };
  b.query_templates = {
      {"SELECT COUNT(*) FROM posts WHERE post_type_id = 1 AND answer_count = {ac} AND score > {sc}",
       {{"ac", ints({0, 1, 2, 3, 5})}, {"sc", ints({-1, 0, 5, 10, 50})}}},
      {"SELECT u.location, AVG(p.score) FROM users u JOIN posts p ON p.owner_user_id = u.id WHERE u.reputation > {rep} AND p.creation_date > {date} GROUP BY u.location ORDER BY 2 DESC LIMIT 20",
       {{"rep", ints({10, 100, 1000, 10000, 50000})}, {"date", {"'2010-01-01'", "'2012-01-01'", "'2014-01-01'", "'2016-01-01'", "'2018-01-01'"}}}},
      {"SELECT p.id, COUNT(v.id) FROM posts p JOIN votes v ON v.post_id = p.id WHERE v.vote_type_id = {vt} AND p.score >= {sc} GROUP BY p.id ORDER BY 2 DESC LIMIT 10",
       {{"vt", ints({1, 2, 3, 5, 8})}, {"sc", ints({0, 5, 10, 25, 100})}}},
      {"SELECT b.name, COUNT(*) FROM badges b JOIN users u ON u.id = b.user_id JOIN comments c ON c.user_id = u.id WHERE c.score > {cs} AND b.name = {badge} GROUP BY b.name",
       {{"cs", ints({0, 1, 2, 5, 10})}, {"badge", {"'Teacher'", "'Editor'", "'Student'", "'Supporter'", "'Scholar'"}}}},
      {"SELECT tag_name, count FROM tags WHERE count > {cnt} AND tag_name LIKE {pat} ORDER BY count DESC",
       {{"cnt", ints({10, 100, 1000, 10000, 100000})}, {"pat", {"'c%'", "'java%'", "'sql%'", "'py%'", "'%script'"}}}},
  };
  return b;
}

inline BenchmarkInstance tpcc_family() {
  BenchmarkInstance b;
  b.name = "tpcc_s";
  b.kind = WorkloadKind::oltp;
  b.tables = {
      {"warehouse", 50, {col("w_id", "INTEGER"), col("w_ytd", "DECIMAL"), col("w_tax", "DECIMAL")}, {"w_id"}, {}},
      {"district", 500, {col("d_id", "INTEGER"), col("d_w_id", "INTEGER"), col("d_next_o_id", "INTEGER"), col("d_ytd", "DECIMAL")}, {"d_w_id", "d_id"}, {{"d_w_id", "warehouse", "w_id"}}},
      {"customer", 1500000, {col("c_id", "INTEGER"), col("c_d_id", "INTEGER"), col("c_w_id", "INTEGER"), col("c_balance", "DECIMAL"), col("c_last", "VARCHAR(16)", {"'BARBARBAR'"})}, {"c_w_id", "c_d_id", "c_id"}, {}},
      {"history", 1500000, {col("h_c_id", "INTEGER"), col("h_amount", "DECIMAL")}, {}, {}},
      {"new_order", 450000, {col("no_o_id", "INTEGER"), col("no_d_id", "INTEGER"), col("no_w_id", "INTEGER")}, {"no_w_id", "no_d_id", "no_o_id"}, {}},
      {"oorder", 1500000, {col("o_id", "INTEGER"), col("o_d_id", "INTEGER"), col("o_w_id", "INTEGER"), col("o_c_id", "INTEGER"), col("o_carrier_id", "INTEGER")}, {"o_w_id", "o_d_id", "o_id"}, {}},
      {"order_line", 15000000, {col("ol_o_id", "INTEGER"), col("ol_d_id", "INTEGER"), col("ol_w_id", "INTEGER"), col("ol_i_id", "INTEGER"), col("ol_amount", "DECIMAL"), col("ol_delivery_d", "TIMESTAMP")}, {"ol_w_id", "ol_d_id", "ol_o_id"}, {}},
      {"item", 100000, {col("i_id", "INTEGER"), col("i_price", "DECIMAL")}, {"i_id"}, {}},
      {"stock", 5000000, {col("s_i_id", "INTEGER"), col("s_w_id", "INTEGER"), col("s_quantity", "INTEGER")}, {"s_w_id", "s_i_id"}, {}},
  };
  b.transactions = {
      {"delivery", {"SELECT no_o_id FROM new_order WHERE no_d_id = 1 AND no_w_id = 1 ORDER BY no_o_id LIMIT 1",
                    "DELETE FROM new_order WHERE no_o_id = 3001 AND no_d_id = 1 AND no_w_id = 1",
                    "UPDATE oorder SET o_carrier_id = 5 WHERE o_id = 3001 AND o_d_id = 1 AND o_w_id = 1",
                    "UPDATE order_line SET ol_delivery_d = NOW() WHERE ol_o_id = 3001 AND ol_d_id = 1 AND ol_w_id = 1",
                    "SELECT SUM(ol_amount) FROM order_line WHERE ol_o_id = 3001 AND ol_d_id = 1 AND ol_w_id = 1",
                    "UPDATE customer SET c_balance = c_balance + 10 WHERE c_id = 7 AND c_d_id = 1 AND c_w_id = 1"}},
      {"new_order", {"SELECT w_tax FROM warehouse WHERE w_id = 1",
                     "UPDATE district SET d_next_o_id = d_next_o_id + 1 WHERE d_id = 1 AND d_w_id = 1",
                     "INSERT INTO oorder (o_id, o_d_id, o_w_id, o_c_id) VALUES (3001, 1, 1, 7)",
                     "INSERT INTO new_order (no_o_id, no_d_id, no_w_id) VALUES (3001, 1, 1)",
                     "SELECT i_price FROM item WHERE i_id = 42",
                     "UPDATE stock SET s_quantity = s_quantity - 5 WHERE s_i_id = 42 AND s_w_id = 1",
                     "INSERT INTO order_line (ol_o_id, ol_d_id, ol_w_id, ol_i_id, ol_amount) VALUES (3001, 1, 1, 42, 19.99)"}},
      {"order_status", {"SELECT c_balance, c_last FROM customer WHERE c_id = 7 AND c_d_id = 1 AND c_w_id = 1",
                        "SELECT o_id, o_carrier_id FROM oorder WHERE o_c_id = 7 AND o_d_id = 1 AND o_w_id = 1 ORDER BY o_id DESC LIMIT 1",
                        "SELECT ol_i_id, ol_amount FROM order_line WHERE ol_o_id = 3001 AND ol_d_id = 1 AND ol_w_id = 1"}},
      {"payment", {"UPDATE warehouse SET w_ytd = w_ytd + 10 WHERE w_id = 1",
                   "UPDATE district SET d_ytd = d_ytd + 10 WHERE d_id = 1 AND d_w_id = 1",
                   "SELECT c_id, c_balance FROM customer WHERE c_last = 'BARBARBAR' AND c_d_id = 1 AND c_w_id = 1 ORDER BY c_id",
                   "UPDATE customer SET c_balance = c_balance - 10 WHERE c_id = 7 AND c_d_id = 1 AND c_w_id = 1",
                   "INSERT INTO history (h_c_id, h_amount) VALUES (7, 10)"}},
      {"stock_level", {"SELECT d_next_o_id FROM district WHERE d_id = 1 AND d_w_id = 1",
                       "SELECT COUNT(DISTINCT s_i_id) FROM order_line JOIN stock ON s_i_id = ol_i_id WHERE ol_w_id = 1 AND ol_d_id = 1 AND ol_o_id >= 2980 AND s_w_id = 1 AND s_quantity < 15"}},
  };
  b.default_mix = {{"delivery", 0.04}, {"new_order", 0.45}, {"order_status", 0.04}, {"payment", 0.43}, {"stock_level", 0.04}};
  return b;
}

inline BenchmarkInstance ycsb_family() {
  BenchmarkInstance b;
  b.name = "ycsb_s";
  b.kind = WorkloadKind::oltp;
  b.tables = {{"usertable", 4000000, {col("ycsb_key", "INTEGER"), col("field1", "TEXT"), col("field2", "TEXT")}, {"ycsb_key"}, {}}};
  b.transactions = {
      {"read_record", {"SELECT * FROM usertable WHERE ycsb_key = 1234"}},
      {"insert_record", {"INSERT INTO usertable (ycsb_key, field1, field2) VALUES (9999999, 'a', 'b')"}},
      {"scan_record", {"SELECT * FROM usertable WHERE ycsb_key >= 1234 AND ycsb_key < 1334 ORDER BY ycsb_key"}},
      {"update_record", {"UPDATE usertable SET field1 = 'x' WHERE ycsb_key = 1234"}},
      {"delete_record", {"DELETE FROM usertable WHERE ycsb_key = 1234"}},
      {"read_modify_write", {"SELECT * FROM usertable WHERE ycsb_key = 1234", "UPDATE usertable SET field2 = 'y' WHERE ycsb_key = 1234"}},
  };
  b.default_mix = {{"read_record", 0.5}, {"insert_record", 0.05}, {"scan_record", 0.05}, {"update_record", 0.3}, {"delete_record", 0.05}, {"read_modify_write", 0.05}};
  return b;
}

inline BenchmarkInstance smallbank_family() {
  BenchmarkInstance b;
  b.name = "smallbank_s";
  b.kind = WorkloadKind::oltp;
  b.tables = {
      {"accounts", 1000000, {col("custid", "BIGINT"), col("name", "VARCHAR(64)")}, {"custid"}, {}},
      {"savings", 1000000, {col("custid", "BIGINT"), col("bal", "FLOAT")}, {"custid"}, {{"custid", "accounts", "custid"}}},
      {"checking", 1000000, {col("custid", "BIGINT"), col("bal", "FLOAT")}, {"custid"}, {{"custid", "accounts", "custid"}}},
  };
  b.transactions = {
      {"amalgamate", {"SELECT bal FROM savings WHERE custid = 1", "SELECT bal FROM checking WHERE custid = 2",
                      "UPDATE savings SET bal = 0 WHERE custid = 1", "UPDATE checking SET bal = bal + 100 WHERE custid = 2"}},
      {"balance", {"SELECT a.name, s.bal, c.bal FROM accounts a JOIN savings s ON s.custid = a.custid JOIN checking c ON c.custid = a.custid WHERE a.custid = 5"}},
      {"deposit_checking", {"SELECT bal FROM checking WHERE custid = 3", "UPDATE checking SET bal = bal + 1.3 WHERE custid = 3"}},
      {"send_payment", {"SELECT bal FROM checking WHERE custid = 3", "UPDATE checking SET bal = bal - 5 WHERE custid = 3", "UPDATE checking SET bal = bal + 5 WHERE custid = 4"}},
      {"transact_savings", {"SELECT bal FROM savings WHERE custid = 3", "UPDATE savings SET bal = bal - 20 WHERE custid = 3"}},
      {"write_check", {"SELECT s.bal, c.bal FROM savings s, checking c WHERE s.custid = 3 AND c.custid = 3", "UPDATE checking SET bal = bal - 5 WHERE custid = 3"}},
  };
  b.default_mix = {{"amalgamate", 0.15}, {"balance", 0.15}, {"deposit_checking", 0.15}, {"send_payment", 0.25}, {"transact_savings", 0.15}, {"write_check", 0.15}};
  return b;
}

inline BenchmarkInstance twitter_family() {
  BenchmarkInstance b;
  b.name = "twitter_s";
  b.kind = WorkloadKind::oltp;
  b.tables = {
      {"user_profiles", 500000, {col("uid", "INTEGER"), col("name", "VARCHAR(255)"), col("followers", "INTEGER")}, {"uid"}, {}},
      {"tweets", 20000000, {col("id", "BIGINT"), col("uid", "INTEGER"), col("text", "CHAR(140)"), col("createdate", "TIMESTAMP")}, {"id"}, {{"uid", "user_profiles", "uid"}}},
      {"added_tweets", 100000, {col("id", "BIGINT"), col("uid", "INTEGER"), col("text", "CHAR(140)")}, {"id"}, {}},
      {"follows", 5000000, {col("f1", "INTEGER"), col("f2", "INTEGER")}, {"f1", "f2"}, {}},
      {"followers", 5000000, {col("f1", "INTEGER"), col("f2", "INTEGER")}, {"f1", "f2"}, {}},
  };
  b.transactions = {
      {"get_tweet", {"SELECT * FROM tweets WHERE id = 10"}},
      {"get_tweets_from_following", {"SELECT f2 FROM follows WHERE f1 = 7 LIMIT 20", "SELECT * FROM tweets WHERE uid IN (1, 2, 3, 4, 5) ORDER BY createdate DESC LIMIT 20"}},
      {"get_followers", {"SELECT f2 FROM followers WHERE f1 = 7 LIMIT 20", "SELECT uid, name FROM user_profiles WHERE uid IN (1, 2, 3, 4, 5)"}},
      {"get_user_tweets", {"SELECT * FROM tweets WHERE uid = 7 LIMIT 10"}},
      {"insert_tweet", {"INSERT INTO added_tweets (uid, text) VALUES (7, 'hello')"}},
  };
  b.default_mix = {{"get_tweet", 0.01}, {"get_tweets_from_following", 0.01}, {"get_followers", 0.07}, {"get_user_tweets", 0.9}, {"insert_tweet", 0.01}};
  return b;
}

inline BenchmarkInstance wiki_family() {
  BenchmarkInstance b;
  b.name = "wiki_s";
  b.kind = WorkloadKind::oltp;
  b.tables = {
      {"page", 1000000, {col("page_id", "INTEGER"), col("page_namespace", "INTEGER"), col("page_title", "VARCHAR(255)"), col("page_latest", "INTEGER")}, {"page_id"}, {}},
      {"revision", 10000000, {col("rev_id", "INTEGER"), col("rev_page", "INTEGER"), col("rev_text_id", "INTEGER"), col("rev_user", "INTEGER")}, {"rev_id"}, {{"rev_page", "page", "page_id"}}},
      {"text", 10000000, {col("old_id", "INTEGER"), col("old_text", "TEXT")}, {"old_id"}, {}},
      {"useracct", 200000, {col("user_id", "INTEGER"), col("user_name", "VARCHAR(255)"), col("user_touched", "TIMESTAMP")}, {"user_id"}, {}},
      {"watchlist", 400000, {col("wl_user", "INTEGER"), col("wl_namespace", "INTEGER"), col("wl_title", "VARCHAR(255)")}, {"wl_user", "wl_namespace", "wl_title"}, {}},
  };
  b.transactions = {
      {"add_watch", {"INSERT INTO watchlist (wl_user, wl_namespace, wl_title) VALUES (3, 0, 'Main')", "UPDATE useracct SET user_touched = NOW() WHERE user_id = 3"}},
      {"remove_watch", {"DELETE FROM watchlist WHERE wl_user = 3 AND wl_namespace = 0 AND wl_title = 'Main'", "UPDATE useracct SET user_touched = NOW() WHERE user_id = 3"}},
      {"update_page", {"SELECT page_id, page_latest FROM page WHERE page_namespace = 0 AND page_title = 'Main'",
                       "INSERT INTO text (old_id, old_text) VALUES (10000001, 'body')",
                       "INSERT INTO revision (rev_id, rev_page, rev_text_id, rev_user) VALUES (10000001, 5, 10000001, 3)",
                       "UPDATE page SET page_latest = 10000001 WHERE page_id = 5"}},
      {"get_page_anonymous", {"SELECT page_id, page_latest FROM page WHERE page_namespace = 0 AND page_title = 'Main'",
                              "SELECT r.rev_id, t.old_text FROM revision r JOIN text t ON t.old_id = r.rev_text_id WHERE r.rev_page = 5 ORDER BY r.rev_id DESC LIMIT 1"}},
      {"get_page_authenticated", {"SELECT user_name FROM useracct WHERE user_id = 3",
                                  "SELECT page_id, page_latest FROM page WHERE page_namespace = 0 AND page_title = 'Main'",
                                  "SELECT r.rev_id, t.old_text FROM revision r JOIN text t ON t.old_id = r.rev_text_id WHERE r.rev_page = 5 ORDER BY r.rev_id DESC LIMIT 1"}},
  };
  b.default_mix = {{"add_watch", 0.07}, {"remove_watch", 0.07}, {"update_page", 0.07}, {"get_page_anonymous", 0.76}, {"get_page_authenticated", 0.03}};
  return b;
}

}  // namespace detail

inline std::vector<BenchmarkInstance> bundled_benchmarks() {
  return {detail::tpch_family(),  detail::ssb_family(),       detail::job_family(),
          detail::tpcds_family(), detail::stack_family(),     detail::tpcc_family(),
          detail::ycsb_family(),  detail::smallbank_family(), detail::twitter_family(),
          detail::wiki_family()};
}

inline const BenchmarkInstance& find_benchmark(const std::vector<BenchmarkInstance>& all,
                                               const std::string& name) {
  for (const auto& b : all) {
    if (b.name == name) return b;
  }
  throw InvalidArgument("unknown benchmark " + name);
}

}  // namespace e2etune
