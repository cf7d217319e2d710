#include "qdb/sql/parser.hpp"

#include "qdb/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace qdb::sql {

namespace {

struct Token {
    enum class Kind { Ident, Number, String, Punct, End };
    Kind kind = Kind::End;
    std::string text;   // uppercased for idents
    std::string raw;    // original spelling
    double number = 0.0;
    int line = 1, col = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            bump();
        }
        if (pos_ < text_.size() && text_[pos_] == '-' && pos_ + 1 < text_.size() &&
            text_[pos_ + 1] == '-') {
            while (pos_ < text_.size() && text_[pos_] != '\n') {
                bump();
            }
            advance();
            return;
        }
        current_ = Token{};
        current_.line = line_;
        current_.col = col_;
        if (pos_ >= text_.size()) {
            current_.kind = Token::Kind::End;
            current_.text = "<end>";
            return;
        }
        const char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                    text_[pos_] == '_')) {
                word.push_back(text_[pos_]);
                bump();
            }
            current_.kind = Token::Kind::Ident;
            current_.raw = word;
            std::transform(word.begin(), word.end(), word.begin(),
                           [](unsigned char ch) { return std::toupper(ch); });
            current_.text = word;
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && pos_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) ||
            (c == '.' && pos_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
            std::string num;
            if (c == '-') {
                num.push_back('-');
                bump();
            }
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                    text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E' ||
                    ((text_[pos_] == '+' || text_[pos_] == '-') && pos_ > 0 &&
                     (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
                num.push_back(text_[pos_]);
                bump();
            }
            current_.kind = Token::Kind::Number;
            current_.raw = current_.text = num;
            try {
                current_.number = std::stod(num);
            } catch (const std::exception&) {
                raise(ErrorCode::SyntaxError, position() + ": bad numeric literal '" + num + "'");
            }
            return;
        }
        if (c == '\'') {
            bump();
            std::string value;
            while (pos_ < text_.size() && text_[pos_] != '\'') {
                value.push_back(text_[pos_]);
                bump();
            }
            if (pos_ >= text_.size()) {
                raise(ErrorCode::SyntaxError, position() + ": unterminated string literal");
            }
            bump();
            current_.kind = Token::Kind::String;
            current_.raw = current_.text = value;
            return;
        }
        // Punctuation, including two-character comparators.
        std::string punct(1, c);
        bump();
        if ((c == '<' || c == '>') && pos_ < text_.size() && text_[pos_] == '=') {
            punct.push_back('=');
            bump();
        }
        current_.kind = Token::Kind::Punct;
        current_.raw = current_.text = punct;
    }

    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string position() const {
        return std::to_string(line_) + ":" + std::to_string(col_);
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token current_;
};

[[noreturn]] void syntax_error(const Token& at, const std::string& message) {
    raise(ErrorCode::SyntaxError, std::to_string(at.line) + ":" + std::to_string(at.col) + ": " +
                                      message + " (got '" + at.text + "')");
}

const char* kUnsupportedKeywords[] = {"GROUP",  "ORDER", "HAVING", "LIMIT",  "UNION",
                                      "UPDATE", "DELETE", "MAX",    "DISTINCT", "OFFSET"};

class Parser {
  public:
    explicit Parser(const std::string& text) : lexer_(text) {}

    Statement parse() {
        Statement stmt;
        if (accept_keyword("EXPLAIN")) {
            stmt.explain = true;
            if (accept_keyword("ANALYZE")) {
                stmt.explain_analyze = true;
            }
        }
        const Token& t = lexer_.peek();
        if (t.kind != Token::Kind::Ident) {
            syntax_error(t, "expected a statement keyword");
        }
        if (t.text == "SELECT") {
            stmt.kind = Statement::Kind::Select;
            stmt.select = std::make_unique<SelectStmt>(parse_select());
        } else if (t.text == "CREATE") {
            stmt.kind = Statement::Kind::CreateTable;
            stmt.create = parse_create();
        } else if (t.text == "INSERT") {
            stmt.kind = Statement::Kind::Insert;
            stmt.insert = parse_insert();
        } else if (t.text == "COPY") {
            stmt.kind = Statement::Kind::CopyCsv;
            stmt.copy = parse_copy();
        } else {
            check_unsupported(t);
            syntax_error(t, "expected SELECT, CREATE, INSERT or COPY");
        }
        accept_punct(";");
        if (lexer_.peek().kind != Token::Kind::End) {
            check_unsupported(lexer_.peek());
            syntax_error(lexer_.peek(), "trailing input after statement");
        }
        return stmt;
    }

  private:
    void check_unsupported(const Token& t) {
        for (const char* kw : kUnsupportedKeywords) {
            if (t.text == kw) {
                raise(ErrorCode::UnsupportedFeature,
                      std::to_string(t.line) + ":" + std::to_string(t.col) + ": " + t.text +
                          " is outside the supported SQL subset");
            }
        }
    }

    bool accept_keyword(const std::string& kw) {
        if (lexer_.peek().kind == Token::Kind::Ident && lexer_.peek().text == kw) {
            lexer_.next();
            return true;
        }
        return false;
    }

    void expect_keyword(const std::string& kw) {
        if (!accept_keyword(kw)) {
            syntax_error(lexer_.peek(), "expected " + kw);
        }
    }

    bool accept_punct(const std::string& p) {
        if (lexer_.peek().kind == Token::Kind::Punct && lexer_.peek().text == p) {
            lexer_.next();
            return true;
        }
        return false;
    }

    void expect_punct(const std::string& p) {
        if (!accept_punct(p)) {
            syntax_error(lexer_.peek(), "expected '" + p + "'");
        }
    }

    std::string expect_ident() {
        if (lexer_.peek().kind != Token::Kind::Ident) {
            syntax_error(lexer_.peek(), "expected an identifier");
        }
        check_unsupported(lexer_.peek());
        return lexer_.next().raw;
    }

    double expect_number() {
        if (lexer_.peek().kind != Token::Kind::Number) {
            syntax_error(lexer_.peek(), "expected a number");
        }
        return lexer_.next().number;
    }

    std::string column_ref() {
        std::string name = expect_ident();
        if (accept_punct(".")) {
            name += "." + expect_ident();
        }
        return name;
    }

    SelectStmt parse_select() {
        expect_keyword("SELECT");
        SelectStmt stmt;
        if (accept_punct("*")) {
            stmt.star = true;
        } else {
            while (true) {
                const Token t = lexer_.peek();
                if (t.kind != Token::Kind::Ident) {
                    syntax_error(t, "expected a column or aggregate");
                }
                check_unsupported(t);
                if (t.text == "RID") {
                    lexer_.next();
                    stmt.rid_only = true;
                } else if (t.text == "SUM" || t.text == "AVG" || t.text == "COUNT" ||
                           t.text == "MIN") {
                    AggSpec agg;
                    agg.kind = t.text == "SUM"   ? AggSpec::Kind::Sum
                               : t.text == "AVG" ? AggSpec::Kind::Avg
                               : t.text == "MIN" ? AggSpec::Kind::Min
                                                 : AggSpec::Kind::Count;
                    lexer_.next();
                    expect_punct("(");
                    if (accept_punct("*")) {
                        if (agg.kind != AggSpec::Kind::Count) {
                            syntax_error(lexer_.peek(), "only COUNT accepts *");
                        }
                        agg.star = true;
                    } else {
                        agg.column = column_ref();
                    }
                    expect_punct(")");
                    stmt.aggregates.push_back(agg);
                } else {
                    stmt.columns.push_back(column_ref());
                }
                if (!accept_punct(",")) {
                    break;
                }
            }
        }
        expect_keyword("FROM");
        stmt.table = expect_ident();

        if (accept_keyword("JOIN")) {
            JoinSpec join;
            join.table = expect_ident();
            expect_keyword("ON");
            join.left_col = column_ref();
            const Token op = lexer_.peek();
            if (op.kind != Token::Kind::Punct) {
                syntax_error(op, "expected a join comparator");
            }
            lexer_.next();
            if (op.text == "=") {
                join.kind = JoinSpec::Kind::Equi;
                join.cmp = PredExpr::Cmp::Eq;
            } else if (op.text == "<=" || op.text == "<" || op.text == ">=" || op.text == ">") {
                join.kind = JoinSpec::Kind::NonEqui;
                join.cmp = op.text == "<="  ? PredExpr::Cmp::Le
                           : op.text == "<" ? PredExpr::Cmp::Lt
                           : op.text == ">=" ? PredExpr::Cmp::Ge
                                             : PredExpr::Cmp::Gt;
            } else {
                syntax_error(op, "expected =, <, <=, > or >=");
            }
            join.right_col = column_ref();
            stmt.join = std::move(join);
        } else if (accept_keyword("SIMJOIN")) {
            JoinSpec join;
            join.kind = JoinSpec::Kind::Similarity;
            join.table = expect_ident();
            expect_keyword("ON");
            expect_keyword("IP");
            expect_punct("(");
            join.left_col = column_ref();
            expect_punct(",");
            join.right_col = column_ref();
            expect_punct(")");
            expect_punct(">");
            join.threshold = expect_number();
            stmt.join = std::move(join);
        }

        if (accept_keyword("WHERE")) {
            stmt.where = parse_pred();
        }
        if (accept_keyword("SAMPLE")) {
            const double k = expect_number();
            if (k < 1 || k != static_cast<std::uint64_t>(k)) {
                raise(ErrorCode::SyntaxError, "SAMPLE expects a positive whole number");
            }
            stmt.sample_k = static_cast<std::uint64_t>(k);
        }
        return stmt;
    }

    std::unique_ptr<PredExpr> parse_pred() { return parse_or(); }

    std::unique_ptr<PredExpr> parse_or() {
        auto left = parse_and();
        while (accept_keyword("OR")) {
            auto node = std::make_unique<PredExpr>();
            node->kind = PredExpr::Kind::Or;
            node->children.push_back(std::move(left));
            node->children.push_back(parse_and());
            left = std::move(node);
        }
        return left;
    }

    std::unique_ptr<PredExpr> parse_and() {
        auto left = parse_not();
        while (accept_keyword("AND")) {
            auto node = std::make_unique<PredExpr>();
            node->kind = PredExpr::Kind::And;
            node->children.push_back(std::move(left));
            node->children.push_back(parse_not());
            left = std::move(node);
        }
        return left;
    }

    std::unique_ptr<PredExpr> parse_not() {
        if (accept_keyword("NOT")) {
            auto node = std::make_unique<PredExpr>();
            node->kind = PredExpr::Kind::Not;
            node->children.push_back(parse_not());
            return node;
        }
        return parse_primary();
    }

    std::unique_ptr<PredExpr> parse_primary() {
        if (accept_punct("(")) {
            auto inner = parse_pred();
            expect_punct(")");
            return inner;
        }
        if (accept_keyword("EXISTS")) {
            expect_punct("(");
            auto node = std::make_unique<PredExpr>();
            node->kind = PredExpr::Kind::Exists;
            node->subquery = std::make_unique<SelectStmt>(parse_select());
            expect_punct(")");
            return node;
        }
        auto node = std::make_unique<PredExpr>();
        node->column = column_ref();
        const Token op = lexer_.peek();
        if (op.kind == Token::Kind::Ident && op.text == "BETWEEN") {
            lexer_.next();
            node->kind = PredExpr::Kind::Between;
            node->low = expect_number();
            expect_keyword("AND");
            node->high = expect_number();
            return node;
        }
        if (op.kind == Token::Kind::Ident && op.text == "LIKE") {
            lexer_.next();
            if (lexer_.peek().kind != Token::Kind::String) {
                syntax_error(lexer_.peek(), "LIKE expects a string pattern");
            }
            const Token pat = lexer_.next();
            node->kind = PredExpr::Kind::Like;
            node->pattern = pat.raw;
            if (node->pattern.empty() || node->pattern.back() != '%') {
                raise(ErrorCode::UnsupportedPredicate,
                      "LIKE supports prefix patterns of the form '<bits>%' only");
            }
            const auto body = node->pattern.substr(0, node->pattern.size() - 1);
            if (body.empty() ||
                body.find_first_not_of("01") != std::string::npos) {
                raise(ErrorCode::UnsupportedPredicate,
                      "LIKE prefix must be a non-empty binary string, got '" + node->pattern +
                          "'");
            }
            return node;
        }
        if (op.kind == Token::Kind::Punct &&
            (op.text == "=" || op.text == "<" || op.text == "<=" || op.text == ">" ||
             op.text == ">=")) {
            lexer_.next();
            node->kind = PredExpr::Kind::Compare;
            node->cmp = op.text == "="    ? PredExpr::Cmp::Eq
                        : op.text == "<"  ? PredExpr::Cmp::Lt
                        : op.text == "<=" ? PredExpr::Cmp::Le
                        : op.text == ">"  ? PredExpr::Cmp::Gt
                                          : PredExpr::Cmp::Ge;
            node->value = expect_number();
            return node;
        }
        syntax_error(op, "expected a comparison operator");
    }

    CreateTableStmt parse_create() {
        expect_keyword("CREATE");
        expect_keyword("TABLE");
        CreateTableStmt stmt;
        stmt.def.name = expect_ident();
        expect_punct("(");
        while (true) {
            ColumnDef col;
            col.name = expect_ident();
            const Token type = lexer_.peek();
            if (type.kind != Token::Kind::Ident) {
                syntax_error(type, "expected a column type");
            }
            if (type.text == "UINT") {
                lexer_.next();
                expect_punct("(");
                col.type = ColumnType::UInt;
                col.bits = static_cast<int>(expect_number());
                expect_punct(")");
            } else if (type.text == "REAL") {
                lexer_.next();
                col.type = ColumnType::Real;
            } else if (type.text == "VECTOR") {
                lexer_.next();
                expect_punct("(");
                col.type = ColumnType::Vector;
                col.dim = static_cast<int>(expect_number());
                expect_punct(")");
            } else {
                syntax_error(type, "expected UINT(b), REAL or VECTOR(d)");
            }
            stmt.def.columns.push_back(col);
            if (!accept_punct(",")) {
                break;
            }
        }
        expect_punct(")");
        return stmt;
    }

    InsertStmt parse_insert() {
        expect_keyword("INSERT");
        expect_keyword("INTO");
        InsertStmt stmt;
        stmt.table = expect_ident();
        expect_keyword("VALUES");
        while (true) {
            expect_punct("(");
            Row row;
            while (true) {
                const Token& t = lexer_.peek();
                if (t.kind == Token::Kind::Number) {
                    const double v = lexer_.next().number;
                    if (v >= 0.0 && v == std::floor(v)) {
                        row.emplace_back(static_cast<std::uint64_t>(v));
                    } else {
                        row.emplace_back(v);
                    }
                } else if (t.kind == Token::Kind::String) {
                    // Vector literal: semicolon-separated reals.
                    const std::string text = lexer_.next().raw;
                    Vec vec;
                    std::stringstream ss(text);
                    std::string piece;
                    while (std::getline(ss, piece, ';')) {
                        try {
                            vec.push_back(std::stod(piece));
                        } catch (const std::exception&) {
                            raise(ErrorCode::SyntaxError,
                                  "bad vector literal component '" + piece + "'");
                        }
                    }
                    row.emplace_back(std::move(vec));
                } else {
                    syntax_error(t, "expected a literal");
                }
                if (!accept_punct(",")) {
                    break;
                }
            }
            expect_punct(")");
            stmt.rows.push_back(std::move(row));
            if (!accept_punct(",")) {
                break;
            }
        }
        return stmt;
    }

    CopyCsvStmt parse_copy() {
        expect_keyword("COPY");
        CopyCsvStmt stmt;
        stmt.table = expect_ident();
        expect_keyword("FROM");
        if (lexer_.peek().kind != Token::Kind::String) {
            syntax_error(lexer_.peek(), "COPY expects a quoted file path");
        }
        stmt.path = lexer_.next().raw;
        return stmt;
    }

    Lexer lexer_;
};

} // namespace

Statement parse_statement(const std::string& text) {
    Parser parser(text);
    return parser.parse();
}

std::vector<Statement> parse_script(const std::string& text) {
    std::vector<Statement> out;
    std::string current;
    bool in_string = false;
    for (char c : text) {
        if (c == '\'') {
            in_string = !in_string;
        }
        if (c == ';' && !in_string) {
            if (current.find_first_not_of(" \t\r\n") != std::string::npos) {
                out.push_back(parse_statement(current));
            }
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (current.find_first_not_of(" \t\r\n") != std::string::npos) {
        out.push_back(parse_statement(current));
    }
    return out;
}

} // namespace qdb::sql
