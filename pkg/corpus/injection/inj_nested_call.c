int inj_nested_call() {
    exec(input());
    return 0;
}
