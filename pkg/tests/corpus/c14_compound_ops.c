int main()
{
    int a;
    int b = 7;
    b %= 4;
    a = b;
    a /= 2;
    a -= 10;
    b += a;
    return 0;
}
